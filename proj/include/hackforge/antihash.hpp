#pragma once

// Collisions for polynomial rolling hashes: lattice construction, exact
// integral LLL, witness extraction and a birthday fallback.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "hackforge/util.hpp"

namespace hackforge {

class Provider;

/// LowFirst: h = sum code(s_j) q^j (position 0 carries q^0).
/// HighFirst: h = h*q + code(c) over the string, i.e. position 0 carries q^(L-1).
enum class Orientation { LowFirst, HighFirst };

std::string_view to_string(Orientation o);

struct RollingHashSpec {
    std::vector<std::uint64_t> bases;
    /// p_i in [2, 2^64]; 2^64 means unsigned wraparound.
    std::vector<u128> moduli;
    char first = 'a';
    char last = 'z';
    /// code(c) = c - first + offset
    long long offset = 1;
    Orientation orientation = Orientation::LowFirst;

    std::size_t components() const { return bases.size(); }
    int charset_size() const { return last - first + 1; }
    /// Throws INVARIANT_VIOLATION.
    void validate() const;

    /// {bases, moduli, charset: [first, last], offset, orientation?}; moduli
    /// may be numbers, numeric strings or expressions such as "2^64".
    static RollingHashSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    friend bool operator==(const RollingHashSpec&, const RollingHashSpec&) = default;
};

/// Exact hash values; throws CHARSET_VIOLATION.
std::vector<u128> eval_rolling_hash(std::string_view s, const RollingHashSpec& spec);

struct LatticeBasis {
    std::size_t n = 0;  ///< hash components
    std::size_t L = 0;  ///< string length
    mpz_class lambda;
    std::vector<std::vector<mpz_class>> rows;

    std::size_t dimension() const { return rows.size(); }
};

/// Rows j < L: [lambda * (q_i^j mod p_i) | e_j]; rows L + i: [lambda * p_i e_i | 0].
LatticeBasis build_lattice(const RollingHashSpec& spec, std::size_t L, const mpz_class& lambda);

struct Rational {
    long long num = 99;
    long long den = 100;
};

/// Exact integral LLL on linearly independent integer rows. When transform is
/// non-null it receives U with reduced = U * original. Throws
/// INVARIANT_VIOLATION for delta outside (1/4, 1) or dependent rows.
void lll_reduce(std::vector<std::vector<mpz_class>>& rows, Rational delta = {},
                std::vector<std::vector<mpz_class>>* transform = nullptr);
LatticeBasis lll_reduce(LatticeBasis basis, Rational delta = {});

struct CollisionPair {
    std::string a;
    std::string b;
    RollingHashSpec spec;
};

/// a_j = first + max(0, d_j), b_j = first + max(0, -d_j), reversed for
/// HighFirst. Empty when d is zero or out of charset range.
std::optional<CollisionPair> collision_from_difference(const std::vector<long long>& d, const RollingHashSpec& spec);

/// Scans reduced rows for (0, d) with d != 0 and |d_j| < charset size; the
/// returned pair is verified with eval_rolling_hash.
std::optional<CollisionPair> extract_collision(const LatticeBasis& reduced, const RollingHashSpec& spec);

struct AntihashConfig {
    Rational delta{99, 100};
    int lambda_log2 = 64;
    /// 0 selects max(16, ceil(n*log2(max p)/log2(51)) + 8).
    std::size_t L0 = 0;
    std::size_t L_max = 256;
    std::uint64_t seed = 0;
    /// Birthday fallback applies when prod p_i <= this bound.
    u128 birthday_modulus_cap = static_cast<u128>(1) << 40;
    std::size_t birthday_budget = std::size_t{1} << 22;
    std::size_t birthday_length = 16;
};

std::size_t initial_length(const RollingHashSpec& spec);

/// Lattice attempts with L doubling from L0 to L_max, then the birthday
/// fallback for small moduli. Throws COLLISION_UNREACHABLE.
CollisionPair find_collision(const RollingHashSpec& spec, const AntihashConfig& cfg = {});

struct BirthdayOptions {
    std::uint64_t seed = 0;
    std::size_t length = 16;
    char first = 'a';
    char last = 'z';
    /// Number of strings hashed; 0 selects ceil(1.177 * sqrt(M)).
    std::size_t pool_size = 0;
};

struct BirthdayResult {
    std::optional<std::pair<std::string, std::string>> pair;
    std::size_t hashed = 0;
};

/// Default pool size ceil(1.177 * sqrt(M)).
std::size_t birthday_pool_size(u128 modulus_estimate);

/// Random strings are drawn in one seeded stream and split into pool A (first
/// half, tabled) and pool B (second half). Each B string is looked up before
/// it is tabled as well, so every string is compared against all earlier ones
/// and the success probability is 1 - exp(-n(n-1)/2M) for n strings.
BirthdayResult birthday_collision(const std::function<u128(std::string_view)>& hasher, u128 modulus_estimate,
                                  std::size_t budget, const BirthdayOptions& opts = {});

struct HashCandidate {
    RollingHashSpec spec;
    /// Provider extraction and source scan agree.
    bool verified = false;
    std::string origin;  ///< "provider", "scan" or "provider+scan"
};

/// Pattern scan for mul-add hash loops with literal or named constants.
std::vector<RollingHashSpec> scan_hash_patterns(const std::string& source);
bool has_hash_pattern(const std::string& source);

/// Provider extraction (optional) plus the pattern scan. Throws NO_SPEC_FOUND.
std::vector<HashCandidate> detect_hash_spec(const std::string& source, Provider* provider,
                                            const std::string& statement = {});

}  // namespace hackforge
