#include "hackforge/antihash.hpp"

#include <cmath>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <unordered_map>

#include "hackforge/error.hpp"
#include "hackforge/provider.hpp"

namespace hackforge {

using nlohmann::json;

namespace {

const u128 kTwo64 = static_cast<u128>(1) << 64;

mpz_class to_mpz(u128 v) {
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
    return (hi << 64) + lo;
}

u128 mod_code(long long code, u128 p) {
    if (code >= 0) return static_cast<u128>(code) % p;
    u128 neg = static_cast<u128>(-(code + 1)) + 1;
    neg %= p;
    return neg == 0 ? 0 : p - neg;
}

}  // namespace

std::string_view to_string(Orientation o) { return o == Orientation::LowFirst ? "low_first" : "high_first"; }

void RollingHashSpec::validate() const {
    if (bases.empty()) throw Error(Errc::InvariantViolation, "hash spec needs at least one component");
    if (bases.size() != moduli.size()) throw Error(Errc::InvariantViolation, "bases and moduli differ in length");
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (moduli[i] < 2 || moduli[i] > kTwo64)
            throw Error(Errc::InvariantViolation, "modulus " + to_decimal(moduli[i]) + " outside [2, 2^64]");
        if (bases[i] < 2 || static_cast<u128>(bases[i]) >= moduli[i])
            throw Error(Errc::InvariantViolation, "base " + std::to_string(bases[i]) + " outside [2, p)");
    }
    if (first > last) throw Error(Errc::InvariantViolation, "empty character range");
}

RollingHashSpec RollingHashSpec::from_json(const json& j) {
    auto bad = [](const std::string& why) { throw Error(Errc::InvariantViolation, "hash spec: " + why); };
    if (!j.is_object()) bad("expected an object");
    auto number = [&](const json& v, const char* what) -> u128 {
        std::optional<u128> r;
        if (v.is_number_unsigned() || v.is_number_integer())
            r = parse_uint_expression(v.dump());
        else if (v.is_string())
            r = parse_uint_expression(v.get<std::string>());
        if (!r) bad(std::string("cannot read ") + what + " " + v.dump());
        return *r;
    };
    auto list = [&](const char* key) {
        if (!j.contains(key)) bad(std::string("missing ") + key);
        json v = j[key];
        if (!v.is_array()) v = json::array({v});
        std::vector<u128> out;
        for (const auto& x : v) out.push_back(number(x, key));
        return out;
    };
    RollingHashSpec s;
    for (u128 b : list("bases")) {
        if (b >= kTwo64) bad("base too large");
        s.bases.push_back(static_cast<std::uint64_t>(b));
    }
    s.moduli = list("moduli");
    if (j.contains("charset")) {
        const json& cs = j["charset"];
        if (!cs.is_array() || cs.size() != 2 || !cs[0].is_string() || !cs[1].is_string() ||
            cs[0].get<std::string>().size() != 1 || cs[1].get<std::string>().size() != 1)
            bad("charset must be [first, last] single characters");
        s.first = cs[0].get<std::string>()[0];
        s.last = cs[1].get<std::string>()[0];
    }
    if (j.contains("offset")) {
        if (!j["offset"].is_number_integer()) bad("offset must be an integer");
        s.offset = j["offset"].get<long long>();
    }
    if (j.contains("orientation")) {
        std::string o = j["orientation"].is_string() ? j["orientation"].get<std::string>() : "";
        if (o == "low_first")
            s.orientation = Orientation::LowFirst;
        else if (o == "high_first")
            s.orientation = Orientation::HighFirst;
        else
            bad("orientation must be low_first or high_first");
    }
    s.validate();
    return s;
}

json RollingHashSpec::to_json() const {
    json j;
    j["bases"] = json::array();
    for (auto b : bases) j["bases"].push_back(b);
    j["moduli"] = json::array();
    for (auto p : moduli) j["moduli"].push_back(p == kTwo64 ? "2^64" : to_decimal(p));
    j["charset"] = {std::string(1, first), std::string(1, last)};
    j["offset"] = offset;
    j["orientation"] = to_string(orientation);
    return j;
}

std::vector<u128> eval_rolling_hash(std::string_view s, const RollingHashSpec& spec) {
    for (char c : s)
        if (c < spec.first || c > spec.last)
            throw Error(Errc::CharsetViolation, std::string("character '") + c + "' outside [" + spec.first + ", " +
                                                    spec.last + "]");
    std::vector<u128> out;
    for (std::size_t i = 0; i < spec.components(); ++i) {
        const u128 p = spec.moduli[i];
        const u128 q = spec.bases[i] % p;
        u128 h = 0;
        if (spec.orientation == Orientation::HighFirst) {
            for (char c : s) h = (h * q % p + mod_code(c - spec.first + spec.offset, p)) % p;
        } else {
            u128 pw = 1 % p;
            for (char c : s) {
                h = (h + mod_code(c - spec.first + spec.offset, p) * pw % p) % p;
                pw = pw * q % p;
            }
        }
        out.push_back(h);
    }
    return out;
}

// ---------------------------------------------------------------- lattice

LatticeBasis build_lattice(const RollingHashSpec& spec, std::size_t L, const mpz_class& lambda) {
    if (L < 1) throw Error(Errc::InvariantViolation, "L must be >= 1");
    if (lambda < 1) throw Error(Errc::InvariantViolation, "lambda must be >= 1");
    const std::size_t n = spec.components();
    LatticeBasis b;
    b.n = n;
    b.L = L;
    b.lambda = lambda;
    b.rows.assign(n + L, std::vector<mpz_class>(n + L, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const u128 p = spec.moduli[i];
        const u128 q = spec.bases[i] % p;
        u128 pw = 1 % p;
        for (std::size_t j = 0; j < L; ++j) {
            b.rows[j][i] = lambda * to_mpz(pw);
            pw = pw * q % p;
        }
        b.rows[L + i][i] = lambda * to_mpz(p);
    }
    for (std::size_t j = 0; j < L; ++j) b.rows[j][n + j] = 1;
    return b;
}

// ---------------------------------------------------------------- LLL

void lll_reduce(std::vector<std::vector<mpz_class>>& rows, Rational delta, std::vector<std::vector<mpz_class>>* transform) {
    if (delta.den <= 0 || 4 * delta.num <= delta.den || delta.num >= delta.den)
        throw Error(Errc::InvariantViolation, "delta must lie in (1/4, 1)");
    const std::size_t n = rows.size();
    if (transform) {
        transform->assign(n, std::vector<mpz_class>(n, 0));
        for (std::size_t i = 0; i < n; ++i) (*transform)[i][i] = 1;
    }
    if (n == 0) return;
    const std::size_t dim = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != dim) throw Error(Errc::InvariantViolation, "ragged basis");

    // 1-based indices below; b(k) is rows[k - 1].
    auto b = [&](std::size_t k) -> std::vector<mpz_class>& { return rows[k - 1]; };
    auto dot = [&](const std::vector<mpz_class>& x, const std::vector<mpz_class>& y) {
        mpz_class s = 0;
        for (std::size_t t = 0; t < dim; ++t) s += x[t] * y[t];
        return s;
    };
    std::vector<mpz_class> d(n + 1, 0);
    std::vector<std::vector<mpz_class>> lam(n + 1, std::vector<mpz_class>(n + 1, 0));
    const mpz_class num(static_cast<long>(delta.num)), den(static_cast<long>(delta.den));
    mpz_class q, tmp, t;

    auto red = [&](std::size_t k, std::size_t l) {
        tmp = 2 * lam[k][l];
        if (abs(tmp) <= d[l]) return;
        // q = round(lam[k][l] / d[l])
        tmp += d[l];
        mpz_class twice_d = 2 * d[l];
        mpz_fdiv_q(q.get_mpz_t(), tmp.get_mpz_t(), twice_d.get_mpz_t());
        auto& bk = b(k);
        const auto& bl = b(l);
        for (std::size_t c = 0; c < dim; ++c) bk[c] -= q * bl[c];
        if (transform) {
            auto& uk = (*transform)[k - 1];
            const auto& ul = (*transform)[l - 1];
            for (std::size_t c = 0; c < n; ++c) uk[c] -= q * ul[c];
        }
        lam[k][l] -= q * d[l];
        for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };

    std::size_t kmax = 1;
    auto swap_k = [&](std::size_t k) {
        std::swap(b(k), b(k - 1));
        if (transform) std::swap((*transform)[k - 1], (*transform)[k - 2]);
        for (std::size_t j = 1; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        mpz_class l = lam[k][k - 1];
        mpz_class B = d[k - 2] * d[k] + l * l;
        mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), d[k - 1].get_mpz_t());
        for (std::size_t i = k + 1; i <= kmax; ++i) {
            t = lam[i][k];
            tmp = d[k] * lam[i][k - 1] - l * t;
            mpz_divexact(lam[i][k].get_mpz_t(), tmp.get_mpz_t(), d[k - 1].get_mpz_t());
            tmp = B * t + l * lam[i][k];
            mpz_divexact(lam[i][k - 1].get_mpz_t(), tmp.get_mpz_t(), d[k].get_mpz_t());
        }
        d[k - 1] = B;
    };

    d[0] = 1;
    d[1] = dot(b(1), b(1));
    if (d[1] == 0) throw Error(Errc::InvariantViolation, "basis rows are linearly dependent");
    std::size_t k = 2;
    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                mpz_class u = dot(b(k), b(j));
                for (std::size_t i = 1; i < j; ++i) {
                    tmp = d[i] * u - lam[k][i] * lam[j][i];
                    mpz_divexact(u.get_mpz_t(), tmp.get_mpz_t(), d[i - 1].get_mpz_t());
                }
                if (j < k) {
                    lam[k][j] = u;
                } else {
                    if (u == 0) throw Error(Errc::InvariantViolation, "basis rows are linearly dependent");
                    d[k] = u;
                }
            }
        }
        red(k, k - 1);
        if (den * (d[k] * d[k - 2] + lam[k][k - 1] * lam[k][k - 1]) < num * d[k - 1] * d[k - 1]) {
            swap_k(k);
            k = std::max<std::size_t>(2, k - 1);
        } else {
            for (std::size_t l = k - 1; l-- > 1;) red(k, l);
            ++k;
        }
    }
}

LatticeBasis lll_reduce(LatticeBasis basis, Rational delta) {
    lll_reduce(basis.rows, delta);
    return basis;
}

// ---------------------------------------------------------------- extraction

std::optional<CollisionPair> collision_from_difference(const std::vector<long long>& d, const RollingHashSpec& spec) {
    const long long limit = spec.charset_size() - 1;
    bool nonzero = false;
    for (long long x : d) {
        if (x > limit || x < -limit) return std::nullopt;
        nonzero |= x != 0;
    }
    if (!nonzero) return std::nullopt;
    CollisionPair pair;
    pair.spec = spec;
    for (long long x : d) {
        pair.a += static_cast<char>(spec.first + std::max(0LL, x));
        pair.b += static_cast<char>(spec.first + std::max(0LL, -x));
    }
    if (spec.orientation == Orientation::HighFirst) {
        std::reverse(pair.a.begin(), pair.a.end());
        std::reverse(pair.b.begin(), pair.b.end());
    }
    return pair;
}

std::optional<CollisionPair> extract_collision(const LatticeBasis& reduced, const RollingHashSpec& spec) {
    const mpz_class limit = spec.charset_size() - 1;
    for (const auto& row : reduced.rows) {
        bool zero_r = true;
        for (std::size_t i = 0; i < reduced.n && zero_r; ++i) zero_r = row[i] == 0;
        if (!zero_r) continue;
        std::vector<long long> d;
        bool in_range = true;
        for (std::size_t j = 0; j < reduced.L && in_range; ++j) {
            const mpz_class& x = row[reduced.n + j];
            in_range = abs(x) <= limit;
            if (in_range) d.push_back(x.get_si());
        }
        if (!in_range) continue;
        auto pair = collision_from_difference(d, spec);
        if (!pair) continue;
        if (eval_rolling_hash(pair->a, spec) == eval_rolling_hash(pair->b, spec)) return pair;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- search

std::size_t initial_length(const RollingHashSpec& spec) {
    long double max_bits = 0;
    for (u128 p : spec.moduli) max_bits = std::max(max_bits, std::log2(static_cast<long double>(p)));
    long double need = std::ceil(static_cast<long double>(spec.components()) * max_bits / std::log2(51.0L));
    return std::max<std::size_t>(16, static_cast<std::size_t>(need) + 8);
}

namespace {
struct U128Hash {
    std::size_t operator()(u128 v) const noexcept {
        std::uint64_t lo = static_cast<std::uint64_t>(v), hi = static_cast<std::uint64_t>(v >> 64);
        return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9E3779B97F4A7C15ULL));
    }
};
}  // namespace

std::size_t birthday_pool_size(u128 modulus_estimate) {
    long double n = std::ceil(1.177L * std::sqrt(static_cast<long double>(modulus_estimate)));
    return static_cast<std::size_t>(std::max<long double>(n, 2));
}

BirthdayResult birthday_collision(const std::function<u128(std::string_view)>& hasher, u128 modulus_estimate,
                                  std::size_t budget, const BirthdayOptions& opts) {
    if (budget < 1) throw Error(Errc::InvariantViolation, "birthday budget must be >= 1");
    if (opts.first > opts.last) throw Error(Errc::InvariantViolation, "empty character range");
    std::size_t pool = opts.pool_size ? opts.pool_size : birthday_pool_size(modulus_estimate);
    pool = std::min(pool, budget);
    const std::size_t pool_a = (pool + 1) / 2;

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> pick(opts.first, opts.last);
    std::unordered_map<u128, std::string, U128Hash> table;
    table.reserve(pool);
    BirthdayResult result;
    std::string s(opts.length, opts.first);
    for (std::size_t i = 0; i < pool; ++i) {
        for (auto& c : s) c = static_cast<char>(pick(rng));
        u128 h = hasher(s);
        ++result.hashed;
        if (i >= pool_a) {
            auto it = table.find(h);
            if (it != table.end() && it->second != s) {
                result.pair = {{it->second, s}};
                return result;
            }
        }
        auto [it, inserted] = table.emplace(h, s);
        if (!inserted && it->second != s && i < pool_a) {
            // Collision inside pool A.
            result.pair = {{it->second, s}};
            return result;
        }
    }
    return result;
}

CollisionPair find_collision(const RollingHashSpec& spec, const AntihashConfig& cfg) {
    spec.validate();
    if (spec.charset_size() < 2)
        throw Error(Errc::CollisionUnreachable, "a single-character alphabet admits only the zero difference");
    if (cfg.lambda_log2 < 0) throw Error(Errc::InvariantViolation, "lambda_log2 must be >= 0");
    mpz_class lambda = mpz_class(1) << cfg.lambda_log2;

    std::size_t L = cfg.L0 ? cfg.L0 : initial_length(spec);
    const std::size_t L_max = std::max(cfg.L_max, std::size_t{1});
    if (L > L_max) L = L_max;
    while (true) {
        LatticeBasis basis = build_lattice(spec, L, lambda);
        lll_reduce(basis.rows, cfg.delta);
        if (auto pair = extract_collision(basis, spec)) return *pair;
        if (L >= L_max) break;
        L = std::min(2 * L, L_max);
    }

    u128 product = 1;
    bool small = true;
    for (u128 p : spec.moduli) {
        if (product > cfg.birthday_modulus_cap / p) {
            small = false;
            break;
        }
        product *= p;
    }
    if (small && product <= cfg.birthday_modulus_cap) {
        auto hasher = [&](std::string_view s) {
            auto h = eval_rolling_hash(s, spec);
            u128 key = 0, radix = 1;
            for (std::size_t i = 0; i < h.size(); ++i) {
                key += h[i] * radix;
                radix *= spec.moduli[i];
            }
            return key;
        };
        BirthdayOptions opts;
        opts.seed = cfg.seed;
        opts.length = cfg.birthday_length;
        opts.first = spec.first;
        opts.last = spec.last;
        opts.pool_size = cfg.birthday_budget;
        BirthdayResult r = birthday_collision(hasher, product, cfg.birthday_budget, opts);
        if (r.pair && eval_rolling_hash(r.pair->first, spec) == eval_rolling_hash(r.pair->second, spec))
            return CollisionPair{r.pair->first, r.pair->second, spec};
    }
    throw Error(Errc::CollisionUnreachable, "lattice search up to L = " + std::to_string(L_max) + " found no witness");
}

// ---------------------------------------------------------------- detection

namespace {

std::string strip_comments(const std::string& src) {
    std::string out;
    out.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src.compare(i, 2, "//") == 0) {
            while (i < src.size() && src[i] != '\n') ++i;
            out += '\n';
        } else if (src.compare(i, 2, "/*") == 0) {
            std::size_t end = src.find("*/", i + 2);
            i = end == std::string::npos ? src.size() : end + 1;
            out += ' ';
        } else if (src[i] == '"') {
            // Keep string literals but skip their content for pattern purposes.
            out += src[i++];
            while (i < src.size() && src[i] != '"') {
                if (src[i] == '\\') ++i;
                ++i;
            }
            if (i < src.size()) out += src[i];
        } else {
            out += src[i];
        }
    }
    return out;
}

std::optional<u128> literal_value(std::string text) {
    text.erase(std::remove(text.begin(), text.end(), '\''), text.end());
    // Drop integer suffixes: 1000000007LL, 131ULL.
    std::string cleaned;
    for (char c : text)
        if (c != 'u' && c != 'U' && c != 'l' && c != 'L') cleaned += c;
    return parse_uint_expression(cleaned);
}

struct Scanner {
    std::string src;
    std::map<std::string, std::optional<u128>> constants;

    explicit Scanner(const std::string& source) : src(strip_comments(source)) {
        static const std::regex define_re(R"(#\s*define\s+([A-Za-z_]\w*)\s+\(?\s*([0-9][0-9'uUlLeE]*(?:\s*[+\-]\s*[0-9]+)?)\s*\)?)");
        static const std::regex assign_re(
            R"(\b([A-Za-z_]\w*)\s*(?:=\s*|\(\s*|\{\s*)\(?\s*(?:\(\s*(?:long\s+long|int|unsigned\s+long\s+long|ll|ull)\s*\)\s*)?([0-9][0-9'uUlLeE]*(?:\s*[+\-]\s*[0-9]+)?)\s*\)?\s*[;,)}])");
        for (const auto* re : {&define_re, &assign_re}) {
            for (std::sregex_iterator it(src.begin(), src.end(), *re), end; it != end; ++it) {
                std::string name = (*it)[1].str();
                auto v = literal_value((*it)[2].str());
                auto found = constants.find(name);
                if (found == constants.end())
                    constants[name] = v;
                else if (found->second != v)
                    found->second = std::nullopt;  // reassigned: ambiguous
            }
        }
    }

    std::optional<u128> resolve(const std::string& token) const {
        if (token.empty()) return std::nullopt;
        if (std::isdigit(static_cast<unsigned char>(token[0]))) return literal_value(token);
        auto it = constants.find(token);
        return it == constants.end() ? std::nullopt : it->second;
    }

    bool unsigned64(const std::string& var) const {
        std::regex decl(R"(\b(?:unsigned\s+long\s+long|uint64_t|ull|u64|ULL|unsigned\s+__int64)\b[^;(){}]*\b)" + var + R"(\b)");
        return std::regex_search(src, decl);
    }
};

struct Found {
    std::uint64_t base;
    u128 mod;
    Orientation orientation;
    char first;
    long long offset;
};

void mapping_from_expr(const std::string& expr, char& first, long long& offset) {
    static const std::regex sub_re(R"(-\s*'(.)'\s*(?:\+\s*(\d+))?)");
    std::smatch m;
    if (std::regex_search(expr, m, sub_re)) {
        char base = m[1].str()[0];
        first = base;
        offset = m[2].matched ? std::stoll(m[2].str()) : 0;
        if (base != 'a' && base != 'A' && base != '0') first = 'a';
    } else {
        first = 'a';
        offset = 'a';  // raw character code
    }
}

}  // namespace

std::vector<RollingHashSpec> scan_hash_patterns(const std::string& source) {
    Scanner sc(source);
    const std::string tok = R"(([A-Za-z_]\w*|\d[\w']*))";
    const std::string idx = R"((?:\s*\[[^\]]*\])?)";
    // h = (h * B [% M] + expr) [% M];
    static const std::regex high_re(R"(\b([A-Za-z_]\w*))" + idx + R"(\s*=\s*\(*\s*\1)" + idx + R"(\s*\*\s*)" + tok +
                                    R"(\s*(?:%\s*)" + tok + R"(\s*)?\)*\s*\+\s*([^;]*?)\s*;)");
    // h += expr * pw [% M];   h = (h + expr * pw) % M;
    static const std::regex low_re(R"(\b([A-Za-z_]\w*))" + idx + R"(\s*(?:\+=|=\s*\(*\s*\1)" + idx +
                                   R"(\s*\+)\s*([^;]*?)\*\s*\(?\s*([A-Za-z_]\w*))" + idx + R"(\s*\)*\s*(?:%\s*)" + tok +
                                   R"()?\s*\)*\s*;)");

    std::vector<Found> found;
    auto add = [&](std::optional<u128> base, std::optional<u128> mod, Orientation o, const std::string& expr) {
        if (!base || !mod || *mod < 2 || *mod > kTwo64 || *base < 2 || *base >= *mod) return;
        Found f{static_cast<std::uint64_t>(*base), *mod, o, 'a', 1};
        mapping_from_expr(expr, f.first, f.offset);
        for (const auto& g : found)
            if (g.base == f.base && g.mod == f.mod && g.orientation == f.orientation) return;
        found.push_back(f);
    };

    for (std::sregex_iterator it(sc.src.begin(), sc.src.end(), high_re), end; it != end; ++it) {
        const std::smatch& m = *it;
        std::string var = m[1].str();
        std::string expr = m[4].str();
        std::optional<u128> mod;
        if (m[3].matched) mod = sc.resolve(m[3].str());
        static const std::regex tail_mod(R"(%\s*([A-Za-z_]\w*|\d[\w']*)\s*\)*\s*$)");
        std::smatch tm;
        if (std::regex_search(expr, tm, tail_mod)) {
            mod = sc.resolve(tm[1].str());
            expr = expr.substr(0, static_cast<std::size_t>(tm.position(0)));
        }
        if (!mod && !m[3].matched && sc.unsigned64(var)) mod = kTwo64;
        add(sc.resolve(m[2].str()), mod, Orientation::HighFirst, expr);
    }

    for (std::sregex_iterator it(sc.src.begin(), sc.src.end(), low_re), end; it != end; ++it) {
        const std::smatch& m = *it;
        std::string var = m[1].str(), expr = m[2].str(), pw = m[3].str();
        std::optional<u128> mod;
        if (m[4].matched) mod = sc.resolve(m[4].str());
        // pw = pw * B [% M];  pw *= B;
        std::regex pw_re(R"(\b)" + pw + idx + R"(\s*(?:\*=\s*|=\s*\(*\s*)" + pw + idx + R"(\s*\*\s*))" + tok +
                         R"(\s*\)*\s*(?:%\s*)" + tok + R"()?\s*;)");
        std::smatch pm;
        if (!std::regex_search(sc.src, pm, pw_re)) continue;
        if (!mod && pm[2].matched) mod = sc.resolve(pm[2].str());
        if (!mod && sc.unsigned64(var)) mod = kTwo64;
        add(sc.resolve(pm[1].str()), mod, Orientation::LowFirst, expr);
    }

    std::vector<RollingHashSpec> specs;
    for (Orientation o : {Orientation::HighFirst, Orientation::LowFirst}) {
        RollingHashSpec spec;
        spec.orientation = o;
        for (const auto& f : found) {
            if (f.orientation != o) continue;
            if (spec.bases.empty()) {
                spec.first = f.first;
                spec.last = f.first == 'a' ? 'z' : (f.first == 'A' ? 'Z' : '9');
                spec.offset = f.offset;
            }
            spec.bases.push_back(f.base);
            spec.moduli.push_back(f.mod);
        }
        if (!spec.bases.empty()) specs.push_back(std::move(spec));
    }
    return specs;
}

bool has_hash_pattern(const std::string& source) { return !scan_hash_patterns(source).empty(); }

namespace {
std::multiset<std::pair<std::uint64_t, u128>> param_set(const RollingHashSpec& s) {
    std::multiset<std::pair<std::uint64_t, u128>> out;
    for (std::size_t i = 0; i < s.components(); ++i) out.emplace(s.bases[i], s.moduli[i]);
    return out;
}
}  // namespace

std::vector<HashCandidate> detect_hash_spec(const std::string& source, Provider* provider, const std::string& statement) {
    std::vector<RollingHashSpec> scanned = scan_hash_patterns(source);
    std::vector<HashCandidate> agreed, provider_only;
    std::vector<bool> matched(scanned.size(), false);

    if (provider) {
        ProviderRequest req{RequestKind::HashSpecExtract, {{"target_source", source}}};
        if (!statement.empty()) req.payload["statement"] = statement;
        try {
            ProviderResponse resp = provider->respond(req);
            for (const auto& c : resp.content["candidates"]) {
                RollingHashSpec spec;
                try {
                    spec = RollingHashSpec::from_json(c);
                } catch (const Error&) {
                    continue;
                }
                bool hit = false;
                for (std::size_t i = 0; i < scanned.size(); ++i) {
                    if (param_set(scanned[i]) != param_set(spec)) continue;
                    matched[i] = true;
                    RollingHashSpec merged = spec;
                    // The scan sees the loop shape; prefer its orientation.
                    merged.orientation = scanned[i].orientation;
                    agreed.push_back({merged, true, "provider+scan"});
                    hit = true;
                    break;
                }
                if (!hit) provider_only.push_back({spec, false, "provider"});
            }
        } catch (const Error& e) {
            if (e.code() == Errc::InvariantViolation) throw;
            // Provider trouble leaves the scan as the only source.
        }
    }

    std::vector<HashCandidate> out = std::move(agreed);
    out.insert(out.end(), provider_only.begin(), provider_only.end());
    for (std::size_t i = 0; i < scanned.size(); ++i)
        if (!matched[i]) out.push_back({scanned[i], false, "scan"});
    if (out.empty()) throw Error(Errc::NoSpecFound, "no polynomial rolling hash recognized");
    return out;
}

}  // namespace hackforge
