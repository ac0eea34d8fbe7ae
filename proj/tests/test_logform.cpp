#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "logdgla/logform.hpp"
#include "logdgla/random_form.hpp"

using namespace logdgla;

namespace {

Term mk(const std::string& coeff, std::vector<int> a, std::vector<int> b, std::vector<int> I,
        std::vector<int> J, std::vector<int> K, int v = 0) {
    Term t;
    t.coeff = parse_rational(coeff);
    t.a = std::move(a);
    t.b = std::move(b);
    t.I = std::move(I);
    t.J = std::move(J);
    t.K = std::move(K);
    t.v = v;
    return t;
}

int total_deg(const LogForm& f) {
    auto pq = f.bidegree();
    REQUIRE(pq.has_value());
    return pq->first + pq->second;
}

}  // namespace

TEST_CASE("normal form") {
    ModelPtr m = fixtures::rank1(1, 1, {"1/2"});
    Term t = mk("1", {2}, {1}, {1}, {}, {});
    SECTION("cancellation gives the empty form") {
        Term nt = t;
        nt.coeff = -nt.coeff;
        LogForm f(m, {t, nt});
        CHECK(f.is_zero());
    }
    SECTION("duplicate keys merge") {
        Term t1 = t, t2 = t;
        t1.coeff = Rational(1, 2);
        t2.coeff = Rational(1, 3);
        LogForm f(m, {t1, t2});
        REQUIRE(f.terms().size() == 1);
        CHECK(f.terms()[0].coeff == Rational(5, 6));
    }
    SECTION("order of input terms is irrelevant") {
        Term u = mk("1", {0}, {0}, {}, {}, {1});
        LogForm f(m, {t, u});
        LogForm g(m, {u, t});
        CHECK(f == g);
        CHECK(normal_form(f) == f);  // idempotent by construction
    }
}

TEST_CASE("dprime on pinned examples") {
    SECTION("P is diagonal on monomials") {
        ModelPtr m = fixtures::rank1(1, 1, {"1/3"});
        LogForm f(m, {mk("1", {2}, {0}, {}, {}, {})});
        LogForm expect(m, {mk("7/3", {2}, {0}, {1}, {}, {})});
        CHECK(dprime(f) == expect);
    }
    SECTION("anti-holomorphic functions are killed at kappa=0") {
        ModelPtr m = fixtures::rank1(1, 1, {"0"});
        LogForm f(m, {mk("1", {0}, {3}, {}, {}, {})});
        CHECK(dprime(f).is_zero());
    }
    SECTION("l=0 reduces to the holomorphic differential") {
        ModelPtr m = fixtures::rank1(2, 0, {});
        LogForm f(m, {mk("1", {1, 1}, {0, 0}, {}, {}, {})});
        LogForm expect(m, {mk("1", {0, 1}, {0, 0}, {}, {1}, {}),
                           mk("1", {1, 0}, {0, 0}, {}, {2}, {})});
        CHECK(dprime(f) == expect);
    }
}

TEST_CASE("dsecond on pinned examples") {
    ModelPtr m = fixtures::rank1(1, 1, {"1/2"});
    SECTION("dzbar appears") {
        LogForm f(m, {mk("1", {0}, {1}, {}, {}, {})});
        LogForm expect(m, {mk("1", {0}, {0}, {}, {}, {1})});
        CHECK(dsecond(f) == expect);
    }
    SECTION("holomorphic coefficients are killed") {
        LogForm f(m, {mk("1", {1}, {0}, {}, {}, {})});
        CHECK(dsecond(f).is_zero());
    }
    SECTION("sign from passing the holomorphic factor") {
        ModelPtr m2 = fixtures::rank1(2, 1, {"1/2"});
        LogForm f(m2, {mk("1", {0, 0}, {0, 1}, {1}, {}, {})});
        LogForm expect(m2, {mk("-1", {0, 0}, {0, 0}, {1}, {}, {2})});
        CHECK(dsecond(f) == expect);
    }
}

TEST_CASE("bracket on pinned examples") {
    ModelPtr m = fixtures::gl2(1, 1, {"2/3"});
    int E11 = m->values.index_of("E11"), E22 = m->values.index_of("E22");
    int E12 = m->values.index_of("E12"), E21 = m->values.index_of("E21");
    SECTION("carry produces z1 (E11 - E22)") {
        LogForm x(m, {mk("1", {0}, {0}, {}, {}, {}, E12)});
        LogForm y(m, {mk("1", {0}, {0}, {}, {}, {}, E21)});
        LogForm expect(m, {mk("1", {1}, {0}, {}, {}, {}, E11), mk("-1", {1}, {0}, {}, {}, {}, E22)});
        CHECK(bracket(x, y) == expect);
    }
    SECTION("repeated one-form factor kills the bracket") {
        LogForm x(m, {mk("1", {0}, {0}, {1}, {}, {}, E12)});
        LogForm y(m, {mk("1", {0}, {0}, {1}, {}, {}, E21)});
        CHECK(bracket(x, y).is_zero());
    }
    SECTION("[alpha,alpha] = 0 in odd total degree") {
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            LogForm alpha = random_form(m, 1, 0, 2, seed, false);
            CHECK(bracket(alpha, alpha).is_zero());
            LogForm beta = random_form(m, 0, 1, 2, seed + 100, false);
            CHECK(bracket(beta, beta).is_zero());
        }
    }
    SECTION("missing structure constants is a configuration error") {
        ValueModule vm = ValueModule::abelian({"mu"}, {Character({Rational(1, 2)})});
        vm.structure.reset();
        ModelPtr m2 = make_model(1, 1, std::move(vm));
        LogForm x(m2, {mk("1", {0}, {0}, {}, {}, {})});
        CHECK_THROWS_AS(bracket(x, x), config_error);
    }
}

TEST_CASE("residue on pinned examples") {
    ModelPtr m = fixtures::mixed(1, 1);
    int mu0 = m->values.index_of("mu0"), muh = m->values.index_of("muh");
    StratumRestriction sr = restrict_to_stratum(*m, {1});
    SECTION("basic residue") {
        LogForm f(m, {mk("1", {0}, {0}, {1}, {}, {}, mu0)});
        LogForm r = residue(f, 1);
        REQUIRE(r.terms().size() == 1);
        CHECK(r.terms()[0].coeff == 1);
        CHECK(r.terms()[0].p() == 0);
        CHECK(*r.model() == *sr.model);
    }
    SECTION("coefficient vanishing on the divisor") {
        LogForm f(m, {mk("1", {1}, {0}, {1}, {}, {}, mu0)});
        CHECK(residue(f, 1).is_zero());
    }
    SECTION("non-invariant components project to zero") {
        LogForm f(m, {mk("1", {0}, {0}, {1}, {}, {}, muh)});
        CHECK(residue(f, 1).is_zero());
    }
    SECTION("out of range branch") {
        LogForm f(m, {mk("1", {0}, {0}, {}, {}, {}, mu0)});
        CHECK_THROWS_AS(residue(f, 2), precondition_error);
    }
}

TEST_CASE("iterated residue") {
    ModelPtr m = fixtures::mixed(2, 2);
    int mu0 = m->values.index_of("mu0");
    SECTION("ascending iteration fixes the sign") {
        LogForm f(m, {mk("1", {0, 0}, {0, 0}, {1, 2}, {}, {}, mu0)});
        LogForm r = residue_m(f, {1, 2});
        REQUIRE(r.terms().size() == 1);
        CHECK(r.terms()[0].coeff == 1);
        CHECK(r.model()->d == 0);
    }
    SECTION("singleton agrees with residue") {
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            LogForm f = random_form(m, 1, 1, 2, seed, false);
            CHECK(residue_m(f, {2}) == residue(f, 2));
        }
    }
    SECTION("admissible forms have no residues") {
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            LogForm f = random_form(m, 2, 1, 2, seed, true);
            REQUIRE(is_admissible(f));
            CHECK(residue(f, 1).is_zero());
            CHECK(residue(f, 2).is_zero());
        }
    }
}

TEST_CASE("admissibility predicate") {
    ModelPtr mh = fixtures::rank1(1, 1, {"1/2"});
    ModelPtr m0 = fixtures::rank1(1, 1, {"0"});
    CHECK(is_admissible(LogForm(mh, {mk("1", {0}, {0}, {1}, {}, {})})));
    CHECK_FALSE(is_admissible(LogForm(m0, {mk("1", {0}, {0}, {1}, {}, {})})));
    CHECK(is_admissible(LogForm(m0, {mk("1", {1}, {0}, {1}, {}, {})})));
}

TEST_CASE("random_form basics") {
    ModelPtr m = fixtures::gl2(2, 1, {"2/3"});
    SECTION("determinism") {
        CHECK(random_form(m, 1, 1, 2, 42, true) == random_form(m, 1, 1, 2, 42, true));
    }
    SECTION("admissible by construction") {
        for (uint64_t seed = 0; seed < 50; ++seed)
            CHECK(is_admissible(random_form(m, 2, 1, 3, seed, true)));
    }
    SECTION("degree zero") {
        LogForm f = random_form(m, 0, 0, 0, 5, true);
        for (const Term& t : f.terms()) {
            CHECK(t.p() == 0);
            CHECK(t.q() == 0);
            for (int x : t.a) CHECK(x == 0);
        }
    }
}

TEST_CASE("differential and bracket identities on random forms") {
    std::vector<ModelPtr> models = {
        fixtures::rank1(1, 1, {"0"}),
        fixtures::rank1(1, 1, {"1/2"}),
        fixtures::rank1(2, 2, {"1/3", "1/2"}),
        fixtures::gl2(2, 1, {"2/3"}),
        fixtures::gl2(2, 2, {"2/3", "1/2"}),
        fixtures::rank1(2, 0, {}),
    };
    Rng rng(11);
    for (const ModelPtr& m : models) {
        for (int trial = 0; trial < 30; ++trial) {
            int p = rng.range(0, m->d), q = rng.range(0, m->d);
            uint64_t seed = rng.next();
            LogForm f = random_form(m, p, q, 2, seed, true);

            CHECK(dprime(dprime(f)).is_zero());
            CHECK(dsecond(dsecond(f)).is_zero());
            CHECK((dprime(dsecond(f)) + dsecond(dprime(f))).is_zero());

            CHECK(is_admissible(dprime(f)));
            CHECK(is_admissible(dsecond(f)));
        }
    }
}

TEST_CASE("DGLA axioms on the gl2 fixtures") {
    std::vector<ModelPtr> models = {fixtures::gl2(1, 1, {"2/3"}),
                                    fixtures::gl2(2, 2, {"2/3", "1/2"}),
                                    fixtures::gl2(1, 0, {})};  // Dolbeault reduction
    Rng rng(23);
    for (const ModelPtr& m : models) {
        for (int trial = 0; trial < 25; ++trial) {
            auto pick = [&] {
                return random_form(m, rng.range(0, m->d), rng.range(0, m->d), 1, rng.next(), true);
            };
            LogForm a = pick(), b = pick(), c = pick();
            if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
            int da = total_deg(a), db = total_deg(b), dc = total_deg(c);

            // graded antisymmetry
            Rational s1((da * db) % 2 == 0 ? 1 : -1);
            CHECK((bracket(a, b) + bracket(b, a) * s1).is_zero());

            // graded Jacobi
            Rational j1((dc * da) % 2 == 0 ? 1 : -1);
            Rational j2((da * db) % 2 == 0 ? 1 : -1);
            Rational j3((db * dc) % 2 == 0 ? 1 : -1);
            LogForm jac = bracket(a, bracket(b, c)) * j1 + bracket(b, bracket(c, a)) * j2 +
                          bracket(c, bracket(a, b)) * j3;
            CHECK(jac.is_zero());

            // Leibniz for d' + d''
            Rational sa(da % 2 == 0 ? 1 : -1);
            LogForm lhs = dtotal(bracket(a, b));
            LogForm rhs = bracket(dtotal(a), b) + bracket(a, dtotal(b)) * sa;
            CHECK((lhs - rhs).is_zero());

            // admissibility closure under the bracket
            CHECK(is_admissible(bracket(a, b)));
        }
    }
}

TEST_CASE("residues commute with the total differential") {
    std::vector<ModelPtr> models = {fixtures::mixed(2, 2), fixtures::gl2(3, 2, {"2/3", "1/2"}),
                                    fixtures::rank1(2, 1, {"0"})};
    Rng rng(31);
    for (const ModelPtr& m : models) {
        for (int trial = 0; trial < 20; ++trial) {
            int p = rng.range(0, m->d), q = rng.range(0, m->d);
            LogForm f = random_form(m, p, q, 2, rng.next(), false);  // ambient
            for (int i = 1; i <= m->l; ++i) {
                LogForm lhs = residue(dtotal(f), i);
                LogForm rhs = dtotal(residue(f, i)) * Rational(-1);
                CHECK((lhs - rhs).is_zero());
            }
            if (m->l >= 2) {
                LogForm lhs = residue_m(dtotal(f), {1, 2});
                LogForm rhs = dtotal(residue_m(f, {1, 2}));  // (-1)^2
                CHECK((lhs - rhs).is_zero());
            }
        }
    }
}
