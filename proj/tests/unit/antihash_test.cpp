#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "hackforge/antihash.hpp"
#include "hackforge/error.hpp"
#include "hackforge/provider.hpp"
#include "test_support.hpp"

namespace hf = hackforge;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using nlohmann::json;

namespace {

cpp_int big(hf::u128 v) { return cpp_int(hf::to_decimal(v)); }
cpp_int big(const mpz_class& v) { return cpp_int(v.get_str()); }

/// Naive polynomial evaluation in arbitrary precision, straight from the
/// definition of each orientation.
std::vector<cpp_int> reference_hash(const std::string& s, const hf::RollingHashSpec& spec) {
    std::vector<cpp_int> out;
    const std::size_t L = s.size();
    for (std::size_t i = 0; i < spec.components(); ++i) {
        cpp_int p = big(spec.moduli[i]), q = spec.bases[i], sum = 0;
        for (std::size_t j = 0; j < L; ++j) {
            cpp_int code = static_cast<long long>(s[j] - spec.first) + spec.offset;
            std::size_t e = spec.orientation == hf::Orientation::LowFirst ? j : L - 1 - j;
            sum += code * boost::multiprecision::pow(q, static_cast<unsigned>(e));
        }
        sum %= p;
        if (sum < 0) sum += p;
        out.push_back(sum);
    }
    return out;
}

bool reference_equal(const hf::CollisionPair& c) {
    return c.a != c.b && c.a.size() == c.b.size() && reference_hash(c.a, c.spec) == reference_hash(c.b, c.spec);
}

hf::RollingHashSpec spec_of(std::vector<std::uint64_t> bases, std::vector<hf::u128> moduli,
                            hf::Orientation o = hf::Orientation::LowFirst) {
    hf::RollingHashSpec s;
    s.bases = std::move(bases);
    s.moduli = std::move(moduli);
    s.orientation = o;
    return s;
}

const hf::u128 kTwo64 = static_cast<hf::u128>(1) << 64;

std::vector<std::vector<cpp_rational>> gram_schmidt(const std::vector<std::vector<mpz_class>>& rows,
                                                    std::vector<std::vector<cpp_rational>>& mu) {
    std::size_t n = rows.size(), dim = rows[0].size();
    std::vector<std::vector<cpp_rational>> star(n, std::vector<cpp_rational>(dim));
    mu.assign(n, std::vector<cpp_rational>(n, 0));
    auto dot = [&](const std::vector<cpp_rational>& a, const std::vector<cpp_rational>& b) {
        cpp_rational s = 0;
        for (std::size_t t = 0; t < dim; ++t) s += a[t] * b[t];
        return s;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<cpp_rational> bi(dim);
        for (std::size_t t = 0; t < dim; ++t) bi[t] = cpp_rational(big(rows[i][t]));
        star[i] = bi;
        for (std::size_t j = 0; j < i; ++j) {
            mu[i][j] = dot(bi, star[j]) / dot(star[j], star[j]);
            for (std::size_t t = 0; t < dim; ++t) star[i][t] -= mu[i][j] * star[j][t];
        }
    }
    return star;
}

cpp_int determinant(std::vector<std::vector<cpp_int>> m) {
    // Bareiss fraction-free elimination.
    std::size_t n = m.size();
    cpp_int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

}  // namespace

TEST(RollingHash, MatchesReferenceEvaluator) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        hf::u128 p = i % 5 == 0 ? kTwo64 : 2 + rng() % ((1ULL << 40) - 2);
        std::uint64_t q = 2 + rng() % static_cast<std::uint64_t>(std::min<hf::u128>(p - 2, ~0ULL));
        auto spec = spec_of({q}, {p}, i % 2 ? hf::Orientation::HighFirst : hf::Orientation::LowFirst);
        spec.offset = static_cast<long long>(rng() % 3);
        std::string s(1 + rng() % 40, 'a');
        for (auto& c : s) c = static_cast<char>('a' + rng() % 26);
        auto got = hf::eval_rolling_hash(s, spec);
        auto want = reference_hash(s, spec);
        ASSERT_EQ(got.size(), 1u);
        EXPECT_EQ(big(got[0]), want[0]) << s;
    }
}

TEST(RollingHash, UnsignedWraparoundEqualsNativeOverflow) {
    auto spec = spec_of({131}, {kTwo64}, hf::Orientation::HighFirst);
    std::string s = "thequickbrownfoxjumpsoverthelazydog";
    unsigned long long h = 0;
    for (char c : s) h = h * 131 + static_cast<unsigned long long>(c - 'a' + 1);
    EXPECT_EQ(hf::eval_rolling_hash(s, spec)[0], static_cast<hf::u128>(h));
}

TEST(RollingHash, CharsetViolation) {
    auto spec = spec_of({31}, {1000000007});
    try {
        hf::eval_rolling_hash("abC", spec);
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::CharsetViolation);
    }
}

TEST(RollingHash, SpecValidationAndJson) {
    EXPECT_THROW(spec_of({}, {}).validate(), hf::Error);
    EXPECT_THROW(spec_of({5}, {5}).validate(), hf::Error);
    EXPECT_THROW(spec_of({1}, {7}).validate(), hf::Error);
    EXPECT_THROW(spec_of({3}, {kTwo64 + 1}).validate(), hf::Error);
    auto s = hf::RollingHashSpec::from_json(
        json::parse(R"({"bases": [131, "137"], "moduli": ["1e9+7", 1000000009], "charset": ["a", "z"], "offset": 1})"));
    EXPECT_EQ(s.bases, (std::vector<std::uint64_t>{131, 137}));
    EXPECT_EQ(big(s.moduli[0]), cpp_int(1000000007));
    EXPECT_EQ(hf::RollingHashSpec::from_json(s.to_json()), s);
    auto w = hf::RollingHashSpec::from_json(json::parse(R"({"bases": [131], "moduli": ["2^64"], "orientation": "high_first"})"));
    EXPECT_EQ(w.moduli[0], kTwo64);
    EXPECT_EQ(w.orientation, hf::Orientation::HighFirst);
}

TEST(Lattice, ShapeAndEntries) {
    auto spec = spec_of({31, 37}, {101, 103});
    auto b = hf::build_lattice(spec, 5, mpz_class(1000));
    ASSERT_EQ(b.dimension(), 7u);
    for (const auto& row : b.rows) EXPECT_EQ(row.size(), 7u);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_EQ(big(b.rows[j][0]), cpp_int(1000 * cpp_int(boost::multiprecision::powm(cpp_int(31), cpp_int(j), cpp_int(101)))));
        EXPECT_EQ(big(b.rows[j][1]), cpp_int(1000 * cpp_int(boost::multiprecision::powm(cpp_int(37), cpp_int(j), cpp_int(103)))));
        for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(b.rows[j][2 + t], j == t ? 1 : 0);
    }
    EXPECT_EQ(b.rows[5][0], 101000);
    EXPECT_EQ(b.rows[6][1], 103000);
    EXPECT_EQ(b.rows[5][1], 0);
    EXPECT_THROW(hf::build_lattice(spec, 0, mpz_class(1)), hf::Error);
}

TEST(Lll, ReducedBasisSatisfiesDefinitionAndTransformIsUnimodular) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t n = 3 + trial % 4;
        std::vector<std::vector<mpz_class>> rows(n, std::vector<mpz_class>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = static_cast<long>(rng() % 2001) - 1000;
        for (std::size_t i = 0; i < n; ++i) rows[i][i] += 5000;  // keep rows independent
        auto original = rows;
        std::vector<std::vector<mpz_class>> U;
        hf::lll_reduce(rows, {3, 4}, &U);

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < n; ++t) {
                mpz_class s = 0;
                for (std::size_t k = 0; k < n; ++k) s += U[i][k] * original[k][t];
                EXPECT_EQ(s, rows[i][t]);
            }
        std::vector<std::vector<cpp_int>> Ub(n, std::vector<cpp_int>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) Ub[i][j] = big(U[i][j]);
        cpp_int det = determinant(Ub);
        EXPECT_TRUE(det == 1 || det == -1) << det;

        std::vector<std::vector<cpp_rational>> mu;
        auto star = gram_schmidt(rows, mu);
        auto norm2 = [&](std::size_t i) {
            cpp_rational s = 0;
            for (const auto& x : star[i]) s += x * x;
            return s;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) EXPECT_LE(abs(mu[i][j]), cpp_rational(1, 2));
        for (std::size_t k = 1; k < n; ++k)
            EXPECT_GE(norm2(k), (cpp_rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * norm2(k - 1));
    }
}

TEST(Lll, RejectsBadDeltaAndDependentRows) {
    std::vector<std::vector<mpz_class>> rows = {{1, 0}, {0, 1}};
    EXPECT_THROW(hf::lll_reduce(rows, {1, 4}), hf::Error);
    EXPECT_THROW(hf::lll_reduce(rows, {1, 1}), hf::Error);
    std::vector<std::vector<mpz_class>> dep = {{1, 2}, {2, 4}};
    EXPECT_THROW(hf::lll_reduce(dep, {99, 100}), hf::Error);
}

TEST(Collision, FromDifference) {
    auto spec = spec_of({31}, {101});
    auto p = hf::collision_from_difference({2, -1, 0}, spec);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->a, "caa");
    EXPECT_EQ(p->b, "aba");
    auto hi = spec;
    hi.orientation = hf::Orientation::HighFirst;
    auto r = hf::collision_from_difference({2, -1, 0}, hi);
    EXPECT_EQ(r->a, "aac");
    EXPECT_FALSE(hf::collision_from_difference({0, 0}, spec));
    EXPECT_FALSE(hf::collision_from_difference({26}, spec));
    EXPECT_TRUE(hf::collision_from_difference({25}, spec));
}

TEST(Collision, RandomSinglePrimes) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 8; ++i) {
        std::uint64_t p;
        auto is_prime = [](std::uint64_t x) {
            if (x < 2) return false;
            for (std::uint64_t d = 2; d * d <= x; ++d)
                if (x % d == 0) return false;
            return true;
        };
        do p = (1ULL << 20) + rng() % ((1ULL << 31) - (1ULL << 20));
        while (!is_prime(p));
        auto spec = spec_of({2 + rng() % (p - 2)}, {p}, i % 2 ? hf::Orientation::HighFirst : hf::Orientation::LowFirst);
        auto pair = hf::find_collision(spec);
        EXPECT_TRUE(reference_equal(pair)) << pair.a << " " << pair.b;
    }
}

TEST(Collision, DoubleHashAndWraparound) {
    auto dbl = hf::find_collision(spec_of({131, 137}, {1000000007, 1000000009}));
    EXPECT_TRUE(reference_equal(dbl));
    auto wrap = hf::find_collision(spec_of({131}, {kTwo64}, hf::Orientation::HighFirst));
    EXPECT_TRUE(reference_equal(wrap));
    // Even base mod 2^64: powers vanish past position 64.
    auto even = hf::find_collision(spec_of({256}, {kTwo64}));
    EXPECT_TRUE(reference_equal(even));
}

TEST(Collision, RestrictedAlphabetAndOffset) {
    auto spec = spec_of({10007}, {998244353});
    spec.first = '0';
    spec.last = '1';
    spec.offset = 0;
    auto pair = hf::find_collision(spec);
    EXPECT_TRUE(reference_equal(pair));
    for (char c : pair.a + pair.b) EXPECT_TRUE(c == '0' || c == '1');
}

TEST(Collision, UnreachableCases) {
    auto one = spec_of({31}, {101});
    one.first = one.last = 'a';
    try {
        hf::find_collision(one);
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::CollisionUnreachable);
    }
    hf::AntihashConfig tiny;
    tiny.L_max = 2;
    tiny.birthday_modulus_cap = 0;
    try {
        hf::find_collision(spec_of({1000003}, {kTwo64 - 59}), tiny);
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::CollisionUnreachable);
    }
}

TEST(Collision, BirthdayFallbackForSmallModulus) {
    hf::AntihashConfig cfg;
    cfg.L_max = 2;  // lattice too short to succeed
    cfg.L0 = 2;
    auto spec = spec_of({31}, {100003});
    auto pair = hf::find_collision(spec, cfg);
    EXPECT_TRUE(reference_equal(pair));
    EXPECT_EQ(pair.a.size(), cfg.birthday_length);
}

TEST(Birthday, PoolSizeAndDeterminism) {
    EXPECT_EQ(hf::birthday_pool_size(10000), 118u);
    EXPECT_EQ(hf::birthday_pool_size(1000000), 1177u);
    auto hasher = [](std::string_view s) {
        hf::u128 h = 0;
        for (char c : s) h = (h * 131 + static_cast<unsigned char>(c)) % 10007;
        return h;
    };
    hf::BirthdayOptions opts;
    opts.seed = 9;
    opts.pool_size = 2000;
    auto a = hf::birthday_collision(hasher, 10007, 1 << 20, opts);
    auto b = hf::birthday_collision(hasher, 10007, 1 << 20, opts);
    ASSERT_TRUE(a.pair);
    EXPECT_EQ(a.pair, b.pair);
    EXPECT_NE(a.pair->first, a.pair->second);
    EXPECT_EQ(hasher(a.pair->first), hasher(a.pair->second));
    EXPECT_LE(a.hashed, 2000u);
    auto capped = hf::birthday_collision(hasher, 10007, 3, opts);
    EXPECT_LE(capped.hashed, 3u);
}

TEST(Birthday, FrequencyNearAnalyticAtDefaultPool) {
    const hf::u128 M = 10000;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 salt(seed * 7919 + 1);
        std::uint64_t k = salt();
        auto hasher = [&](std::string_view s) {
            std::uint64_t h = k;
            for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ULL;
            h ^= h >> 29;
            h *= 0xBF58476D1CE4E5B9ULL;
            h ^= h >> 32;
            return static_cast<hf::u128>(h % 10000);
        };
        hf::BirthdayOptions opts;
        opts.seed = seed;
        opts.length = 24;
        hits += hf::birthday_collision(hasher, M, 1 << 20, opts).pair.has_value();
    }
    // n = 118 strings, P = 1 - exp(-118*117/20000) ~ 0.50; 200 trials give sd ~ 0.035.
    EXPECT_GT(hits, 70);
    EXPECT_LT(hits, 130);
}

TEST(Detection, ScansCommonLoopShapes) {
    struct Case {
        const char* src;
        std::uint64_t base;
        hf::u128 mod;
        hf::Orientation o;
        char first;
        long long offset;
    };
    const Case cases[] = {
        {"unsigned long long h = 0; for (char c : s) h = h * 131 + (c - 'a' + 1);", 131, kTwo64,
         hf::Orientation::HighFirst, 'a', 1},
        {"const long long MOD = 1e9 + 7; long long h = 0; for (char c : s) h = (h * 31 + c - 'a' + 1) % MOD;", 31,
         1000000007, hf::Orientation::HighFirst, 'a', 1},
        {"#define P 998244353\nlong long h=0,pw=1; for(char c:s){ h = (h + (c-'a'+1)*pw) % P; pw = pw * 37 % P; }", 37,
         998244353, hf::Orientation::LowFirst, 'a', 1},
        {"long long hs[N]; for (int i = 0; i < n; ++i) hs[i+1] = (hs[i] * 10007 + s[i]) % 1000000009;", 10007, 1000000009,
         hf::Orientation::HighFirst, 'a', 'a'},
    };
    for (const auto& c : cases) {
        auto specs = hf::scan_hash_patterns(c.src);
        ASSERT_EQ(specs.size(), 1u) << c.src;
        const auto& s = specs[0];
        ASSERT_EQ(s.components(), 1u) << c.src;
        EXPECT_EQ(s.bases[0], c.base) << c.src;
        EXPECT_EQ(s.moduli[0], c.mod) << c.src;
        EXPECT_EQ(s.orientation, c.o) << c.src;
        EXPECT_EQ(s.first, c.first) << c.src;
        EXPECT_EQ(s.offset, c.offset) << c.src;
    }
    EXPECT_FALSE(hf::has_hash_pattern("int main() { long long s = 0; for (int x : a) s += x; }"));
}

TEST(Detection, DoubleHashIsOneSpec) {
    auto specs = hf::scan_hash_patterns(R"(
        const long long M1 = 1000000007, M2 = 1000000009;
        for (char c : s) { h1 = (h1 * 131 + c) % M1; h2 = (h2 * 137 + c) % M2; }
    )");
    ASSERT_EQ(specs.size(), 1u);
    EXPECT_EQ(specs[0].components(), 2u);
}

TEST(Detection, ProviderAgreementMarksVerified) {
    const std::string src = hf::read_file(hf::testing::fixture_package("equal_strings") / "submissions" / "hash_u64.cpp");
    hf::ScriptedProvider agree({{hf::RequestKind::HashSpecExtract, json::object(),
                                 R"({"candidates": [{"bases": ["131"], "moduli": ["2^64"], "charset": ["a", "z"], "offset": 1}]})",
                                 ""}});
    auto c = hf::detect_hash_spec(src, &agree, "statement");
    ASSERT_FALSE(c.empty());
    EXPECT_TRUE(c[0].verified);
    EXPECT_EQ(c[0].origin, "provider+scan");
    EXPECT_EQ(c[0].spec.orientation, hf::Orientation::HighFirst);

    hf::ScriptedProvider disagree({{hf::RequestKind::HashSpecExtract, json::object(),
                                    R"({"hash_parameters": {"base": 137, "modulus": "2^64"}})", ""}});
    auto d = hf::detect_hash_spec(src, &disagree);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_FALSE(d[0].verified);
    EXPECT_EQ(d[0].origin, "provider");
    EXPECT_EQ(d[1].origin, "scan");

    auto scan_only = hf::detect_hash_spec(src, nullptr);
    ASSERT_EQ(scan_only.size(), 1u);
    EXPECT_EQ(scan_only[0].origin, "scan");

    try {
        hf::detect_hash_spec("int main() {}", nullptr);
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::NoSpecFound);
    }
}
