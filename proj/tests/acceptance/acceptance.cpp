// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "hackforge/analyst.hpp"
#include "hackforge/antihash.hpp"
#include "hackforge/calibration.hpp"
#include "hackforge/cli.hpp"
#include "hackforge/error.hpp"
#include "hackforge/genforge.hpp"
#include "hackforge/metrics.hpp"
#include "hackforge/package.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
namespace hf = hackforge;
using boost::multiprecision::cpp_int;
using hf::testing::fixture_package;
using hf::testing::shared_sandbox;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    // Records the first failed expectation; later ones are still evaluated.
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (pass) detail = what;
        pass = false;
    }
};

// ---- independent hash evaluator ------------------------------------------

cpp_int big(hf::u128 v) { return cpp_int(hf::to_decimal(v)); }

std::vector<cpp_int> reference_hash(const std::string& s, const hf::RollingHashSpec& spec) {
    std::vector<cpp_int> out;
    for (std::size_t i = 0; i < spec.components(); ++i) {
        cpp_int p = big(spec.moduli[i]), q = spec.bases[i], sum = 0, pw = 1;
        for (std::size_t j = 0; j < s.size(); ++j) {
            std::size_t pos = spec.orientation == hf::Orientation::LowFirst ? j : s.size() - 1 - j;
            cpp_int code = static_cast<long long>(s[pos] - spec.first) + spec.offset;
            sum += code * pw;
            pw *= q;
        }
        sum %= p;
        if (sum < 0) sum += p;
        out.push_back(sum);
    }
    return out;
}

bool in_charset(const std::string& s, const hf::RollingHashSpec& spec) {
    for (char c : s)
        if (c < spec.first || c > spec.last) return false;
    return true;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---- criteria --------------------------------------------------------------

Outcome antihash_soundness() {
    std::mt19937_64 rng(20240601);
    std::vector<hf::RollingHashSpec> specs;
    for (int i = 0; i < 48; ++i) {
        std::uint64_t p;
        do p = (std::uint64_t{1} << 20) + rng() % ((std::uint64_t{1} << 31) - (std::uint64_t{1} << 20));
        while (!is_prime(p));
        hf::RollingHashSpec s;
        s.moduli = {p};
        s.bases = {2 + rng() % (p - 3)};
        s.orientation = rng() % 2 ? hf::Orientation::LowFirst : hf::Orientation::HighFirst;
        specs.push_back(s);
    }
    hf::RollingHashSpec dbl;
    dbl.bases = {131, 137};
    dbl.moduli = {1000000007, 1000000009};
    specs.push_back(dbl);
    hf::RollingHashSpec wrap;
    wrap.bases = {131};
    wrap.moduli = {static_cast<hf::u128>(1) << 64};
    wrap.orientation = hf::Orientation::HighFirst;
    specs.push_back(wrap);

    Outcome o;
    int verified = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        try {
            hf::CollisionPair c = hf::find_collision(specs[i]);
            bool ok = c.a != c.b && c.a.size() == c.b.size() && in_charset(c.a, specs[i]) &&
                      in_charset(c.b, specs[i]) && reference_hash(c.a, specs[i]) == reference_hash(c.b, specs[i]);
            verified += ok;
            o.expect(ok, "spec " + std::to_string(i) + ": pair does not collide under the reference evaluator");
        } catch (const std::exception& e) {
            o.expect(false, "spec " + std::to_string(i) + ": " + e.what());
        }
    }
    o.detail = std::to_string(verified) + "/" + std::to_string(specs.size()) + " verified" +
               (o.pass ? "" : "; " + o.detail);
    return o;
}

Outcome birthday_fidelity() {
    const hf::u128 M = 10000;
    auto trials = [&](std::size_t pool) {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            // Keyed mixing hash reduced mod M: a stand-in for a uniform random function.
            std::mt19937_64 salt(seed * 104729 + 17);
            std::uint64_t key = salt();
            auto hasher = [&](std::string_view s) {
                std::uint64_t h = key;
                for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ULL;
                h ^= h >> 31;
                h *= 0x94D049BB133111EBULL;
                h ^= h >> 29;
                return static_cast<hf::u128>(h % 10000);
            };
            hf::BirthdayOptions opts;
            opts.seed = seed;
            opts.length = 20;
            opts.pool_size = pool;
            hits += hf::birthday_collision(hasher, M, std::size_t{1} << 20, opts).pair.has_value();
        }
        return hits;
    };
    Outcome o;
    std::size_t n1 = hf::birthday_pool_size(M);
    o.expect(n1 == static_cast<std::size_t>(std::ceil(1.177 * 100)), "default pool size " + std::to_string(n1));
    int at_threshold = trials(n1);
    int at_three = trials(300);
    o.expect(at_threshold >= 40 && at_threshold <= 60,
             "pool " + std::to_string(n1) + ": " + std::to_string(at_threshold) + "/100 outside [40, 60]");
    o.expect(at_three >= 99, "pool 300: " + std::to_string(at_three) + "/100 below 99");
    std::string summary = "pool " + std::to_string(n1) + ": " + std::to_string(at_threshold) + "/100 collided; pool 300: " +
                          std::to_string(at_three) + "/100";
    o.detail = o.pass ? summary : summary + "; " + o.detail;
    return o;
}

Outcome analyst_oracles() {
    Outcome o;
    for (std::uint64_t N = 1; N <= 10000 && o.pass; ++N) {
        std::uint64_t direct = 0;
        for (std::uint64_t i = 1; i <= N; ++i) direct += N / i;
        o.expect(hf::harmonic_operation_count(N) == direct, "harmonic mismatch at N = " + std::to_string(N));
    }
    const mpz_class bound("9223372036854775807");
    const cpp_int cbound = (cpp_int(1) << 63) - 1;
    std::size_t pairs = 0;
    for (std::uint64_t n = 0; n <= 80; ++n) {
        cpp_int c = 1;
        for (std::uint64_t k = 0; k <= n; ++k, ++pairs) {
            if (k > 0) c = c * (n - k + 1) / k;
            o.expect(hf::binomial_exceeds_bound(n, k, bound) == (c > cbound),
                     "binomial mismatch at (" + std::to_string(n) + ", " + std::to_string(k) + ")");
        }
    }
    if (o.pass) o.detail = "N <= 10000 and " + std::to_string(pairs) + " binomial pairs agree";
    return o;
}

Outcome verdict_determinism() {
    hf::Judge judge(shared_sandbox(), hf::load_package(fixture_package("echo")));
    const std::map<std::string, hf::VerdictKind> want = {{"ac_echo", hf::VerdictKind::AC},
                                                         {"wa_off_by_one", hf::VerdictKind::WA},
                                                         {"tle_busy", hf::VerdictKind::TLE},
                                                         {"re_abort", hf::VerdictKind::RE},
                                                         {"mle_alloc", hf::VerdictKind::MLE}};
    Outcome o;
    for (const auto& [id, kind] : want) {
        const hf::Submission* s = judge.package().find_submission(id);
        if (!s) {
            o.expect(false, "missing " + id);
            continue;
        }
        int same = 0;
        for (int i = 0; i < 10; ++i) same += judge.judge_submission(*s, judge.package().local_suite).verdict.kind == kind;
        o.expect(same == 10, id + ": " + std::to_string(same) + "/10 " + std::string(hf::to_string(kind)));
    }
    if (o.pass) o.detail = "5 programs x 10 judgings";
    return o;
}

hf::ScriptedProvider calibration_transcript(const std::string& pkg) {
    return hf::ScriptedProvider(
        hf::load_transcript((fixture_package(pkg) / "transcripts" / "calibrate.json").string()), pkg);
}

bool accepts(hf::Judge& judge, const hf::ToolSource& validator, const std::string& input) {
    return hf::run_validator(judge.sandbox(), judge.compiled_tool(validator), input).valid;
}

Outcome calibration_regression() {
    Outcome o;
    auto streak = [&](const hf::CalibrationResult& r, const std::string& name) {
        o.expect(r.log.terminated_by == hf::Termination::CleanStreak && r.log.K == 3 && r.log.iterations.size() <= 10,
                 name + ": " + std::string(hf::to_string(r.log.terminated_by)) + " after " +
                     std::to_string(r.log.iterations.size()) + " iterations");
    };
    try {
        hf::Judge j309(shared_sandbox(), hf::load_package(fixture_package("cf309c")));
        auto p309 = calibration_transcript("cf309c");
        auto r309 = hf::refine_validator(j309, p309);
        streak(r309, "309C");
        const std::string zero = "1 1\n5\n0\n";
        o.expect(!accepts(j309, *j309.package().validator, zero), "309C: original validator already accepts b_j = 0");
        o.expect(accepts(j309, r309.tool, zero), "309C: refined validator rejects b_j = 0");

        hf::Judge j177(shared_sandbox(), hf::load_package(fixture_package("cf177c2")));
        auto p177 = calibration_transcript("cf177c2");
        auto r177 = hf::refine_validator(j177, p177);
        streak(r177, "177C2");
        std::ostringstream big;
        big << "2000\n150000\n";
        int written = 0;
        for (int u = 1; u <= 2000 && written < 150000; ++u)
            for (int v = u + 1; v <= 2000 && written < 150000; ++v, ++written) big << u << " " << v << "\n";
        big << "0\n";
        o.expect(accepts(j177, *j177.package().validator, big.str()), "177C2: original validator rejects k = 150000");
        o.expect(!accepts(j177, r177.tool, big.str()), "177C2: refined validator accepts k = 150000");
        o.expect(accepts(j177, r177.tool, "3\n1\n1 2\n1\n2 3\n"), "177C2: refined validator rejects a valid input");

        hf::Judge j25(shared_sandbox(), hf::load_package(fixture_package("cf25b")));
        auto p25 = calibration_transcript("cf25b");
        auto r25 = hf::refine_checker(j25, p25, p25);
        streak(r25, "25B");
        auto checker = j25.compiled_tool(r25.tool);
        const std::string in = "6\n549871\n", jury = "54-98-71\n";
        auto verdict = [&](const std::string& out) {
            return hf::run_checker(j25.sandbox(), &checker, in, out, jury).outcome;
        };
        o.expect(verdict("54-98 -71\n") != hf::CheckerOutcome::Accepted, "25B: embedded whitespace accepted");
        o.expect(verdict("549-871\n") == hf::CheckerOutcome::Accepted, "25B: alternative hyphenation rejected");
        o.expect(verdict(jury) == hf::CheckerOutcome::Accepted, "25B: jury answer rejected");
        o.expect(verdict("5-49871\n") != hf::CheckerOutcome::Accepted, "25B: group of one accepted");
        if (o.pass)
            o.detail = "309C " + std::to_string(r309.log.iterations.size()) + " it, 177C2 " +
                       std::to_string(r177.log.iterations.size()) + " it, 25B " +
                       std::to_string(r25.log.iterations.size()) + " it, all CLEAN_STREAK";
    } catch (const std::exception& e) {
        o.expect(false, e.what());
    }
    return o;
}

Outcome hack_predicate() {
    Outcome o;
    const std::optional<hf::Verdict> ac = hf::Verdict::accepted();
    const std::optional<hf::Verdict> wa = hf::Verdict::failed(hf::VerdictKind::WA, "");
    int successes = 0;
    for (int mask = 0; mask < 8; ++mask) {
        bool valid = mask & 1, oracle_ac = mask & 2, target_ac = mask & 4;
        bool got = hf::hack_succeeded(valid, oracle_ac ? ac : wa, target_ac ? ac : wa);
        successes += got;
        o.expect(got == (valid && oracle_ac && !target_ac), "combination " + std::to_string(mask));
    }
    if (o.pass) o.detail = "8 combinations, " + std::to_string(successes) + " success";
    return o;
}

std::string rate(const hf::Rate& r) {
    return r ? std::to_string(r->num) + "/" + std::to_string(r->den) : std::string("UNDEFINED");
}

hf::LabeledOutcome labeled(bool correct, bool ac) {
    return {"s", correct ? hf::GroundTruth::Correct : hf::GroundTruth::Incorrect,
            ac ? hf::Verdict::accepted() : hf::Verdict::failed(hf::VerdictKind::WA, "", 0)};
}

Outcome metrics_exactness() {
    Outcome o;
    struct Fixture {
        int pa, pr, na, nr;
        std::string tpr, tnr;
    };
    const Fixture fixtures[] = {
        {1, 0, 0, 1, "1/1", "1/1"},        {0, 1, 1, 0, "0/1", "0/1"},       {2, 1, 1, 2, "2/3", "2/3"},
        {3, 1, 0, 4, "3/4", "1/1"},        {5, 5, 3, 7, "1/2", "7/10"},      {0, 0, 2, 2, "UNDEFINED", "1/2"},
        {4, 0, 0, 0, "1/1", "UNDEFINED"},  {0, 0, 0, 0, "UNDEFINED", "UNDEFINED"}, {6, 2, 9, 3, "3/4", "1/4"},
        {1, 2, 5, 1, "1/3", "1/6"},
    };
    for (const auto& f : fixtures) {
        std::vector<hf::LabeledOutcome> pop;
        for (int i = 0; i < f.pa; ++i) pop.push_back(labeled(true, true));
        for (int i = 0; i < f.pr; ++i) pop.push_back(labeled(true, false));
        for (int i = 0; i < f.na; ++i) pop.push_back(labeled(false, true));
        for (int i = 0; i < f.nr; ++i) pop.push_back(labeled(false, false));
        auto c = hf::compute_classification(pop);
        o.expect(rate(c.tpr) == f.tpr && rate(c.tnr) == f.tnr, "classification fixture " + f.tpr + " " + f.tnr);
    }
    std::vector<hf::CascadeResult> cascades(4);
    cascades[0].winning_stage = hf::Stage::Provider;
    cascades[0].turns_used = 1;
    cascades[1].winning_stage = hf::Stage::Provider;
    cascades[1].turns_used = 2;
    cascades[2].winning_stage = hf::Stage::Stress;
    auto h = hf::compute_hsr(cascades);
    o.expect(rate(h.hsr) == "3/4" && rate(h.avg_turns) == "3/2", "hsr " + rate(h.hsr) + " avg " + rate(h.avg_turns));
    o.expect(!hf::compute_hsr({}).hsr, "empty hsr is defined");

    hf::Judge judge(shared_sandbox(), hf::load_package(fixture_package("maxelem")));
    const auto& raw = judge.package().local_suite;
    std::vector<hf::TestCase> filtered;
    for (const auto& t : raw)
        if (judge.validate(t.input).valid) filtered.push_back(t);
    auto before = hf::compute_classification(hf::evaluate_suite(judge, raw));
    auto after = hf::compute_classification(hf::evaluate_suite(judge, filtered));
    auto vpr_before = hf::compute_vpr(judge, raw), vpr_after = hf::compute_vpr(judge, filtered);
    o.expect(before.tnr && after.tnr && *after.tnr < *before.tnr,
             "TNR did not drop: " + rate(before.tnr) + " -> " + rate(after.tnr));
    o.expect(vpr_after == hf::Ratio::of(1, 1) && vpr_before < vpr_after, "VPR did not rise to 1");
    if (o.pass)
        o.detail = "10 fixtures + HSR; masking TNR " + rate(before.tnr) + " -> " + rate(after.tnr) + ", VPR " +
                   rate(vpr_before) + " -> " + rate(vpr_after);
    return o;
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
    std::vector<const char*> argv{"hackforge"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    int st = hf::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str() + e.str();
    return st;
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = hf::read_file(e.path());
    return files;
}

Outcome cascade_replay() {
    Outcome o;
    hf::testing::TempDir a_dir, b_dir, q_dir;
    auto a = hf::testing::copy_package("cf1388a", a_dir);
    auto b = hf::testing::copy_package("cf1388a", b_dir);
    std::string log;
    o.expect(cli({"hack", a.string(), "--target", "greedy_fixed"}, &log) == 0, "1388A hack failed: " + log);
    o.expect(cli({"hack", b.string(), "--target", "greedy_fixed"}) == 0, "1388A rerun failed");
    std::string n_value;
    try {
        auto cascade = nlohmann::json::parse(hf::read_file(a / "hacks" / "greedy_fixed" / "cascade.json"));
        o.expect(cascade["winning_stage"] == "PROVIDER", "1388A stage " + cascade["winning_stage"].dump());
        o.expect(cascade["turns_used"] == 1, "1388A turns_used " + cascade["turns_used"].dump());
        std::istringstream in(hf::read_file(a / "hacks" / "greedy_fixed" / "1.in"));
        long long t = 0, n = 0;
        in >> t >> n;
        n_value = std::to_string(n);
        o.expect(t == 1 && (n == 36 || n == 40 || n == 44), "1388A hack input N = " + n_value);
        o.expect(tree(a / "hacks") == tree(b / "hacks"), "1388A rerun differs");
    } catch (const std::exception& e) {
        o.expect(false, std::string("1388A: ") + e.what());
    }

    auto q = hf::testing::copy_package("quadratic_set", q_dir);
    o.expect(cli({"hack", q.string(), "--target", "heuristic"}, &log) == 0, "quadratic set hack failed: " + log);
    try {
        auto cascade = nlohmann::json::parse(hf::read_file(q / "hacks" / "heuristic" / "cascade.json"));
        o.expect(cascade["winning_stage"] == "STRESS", "quadratic set stage " + cascade["winning_stage"].dump());
        std::istringstream in(hf::read_file(q / "hacks" / "heuristic" / "1.in"));
        long long n = 0;
        in >> n;
        o.expect(n == 998787, "quadratic set hack N = " + std::to_string(n));
    } catch (const std::exception& e) {
        o.expect(false, std::string("quadratic set: ") + e.what());
    }
    if (o.pass) o.detail = "1388A PROVIDER turn 1 N = " + n_value + ", rerun identical; quadratic set STRESS N = 998787";
    return o;
}

// AC on a suite implies AC on every prefix of it.
bool prefix_monotone(hf::Judge& judge, const hf::Submission& s, const std::vector<hf::TestCase>& suite) {
    bool later_ac = judge.judge_submission(s, suite).verdict.is_ac();
    for (std::size_t k = suite.size(); k-- > 0;) {
        std::vector<hf::TestCase> prefix(suite.begin(), suite.begin() + k);
        bool ac = judge.judge_submission(s, prefix).verdict.is_ac();
        if (later_ac && !ac) return false;
        later_ac = ac;
    }
    return true;
}

Outcome augmentation_invariants() {
    Outcome o;
    hf::CampaignConfig cfg;
    cfg.workers = 1;
    std::size_t hacked = 0;
    for (const char* name : {"maxelem", "cf1388a", "equal_strings"}) {
        try {
            const std::string pkg_name = name;
            hf::Judge judge(shared_sandbox(), hf::load_package(fixture_package(pkg_name)));
            fs::path transcript = fixture_package(pkg_name) / "transcripts" / "hack.json";
            std::vector<hf::HackAttempt> wins;
            hf::ScriptedProvider provider(hf::load_transcript(transcript.string()));
            for (const auto& target : judge.identify_targets()) {
                auto r = hf::cascade_hack(judge, target, provider, cfg);
                if (const auto* w = r.winning_attempt()) wins.push_back(*w);
            }
            o.expect(!wins.empty(), pkg_name + ": no successful hacks to augment with");
            hacked += wins.size();
            auto aug = hf::augment_suite(judge, wins);
            const auto& suite = aug.package.local_suite;
            hf::Judge augmented(shared_sandbox(), aug.package);
            o.expect(hf::compute_vpr(augmented, suite) == hf::Ratio::of(1, 1), pkg_name + ": VPR below 1");
            for (const auto& w : wins) {
                const auto* s = augmented.package().find_submission(w.target_id);
                o.expect(!augmented.judge_submission(*s, suite).verdict.is_ac(),
                         pkg_name + ": " + w.target_id + " still AC on the augmented suite");
            }
            for (const auto& s : augmented.package().submissions)
                o.expect(prefix_monotone(augmented, s, suite), pkg_name + ": monotonicity fails for " + s.id);
        } catch (const std::exception& e) {
            o.expect(false, std::string(name) + ": " + e.what());
        }
    }
    if (o.pass) o.detail = std::to_string(hacked) + " hacked targets over 3 packages; VPR 1, targets rejected, monotone";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "anti-hash soundness", antihash_soundness},
        {2, "birthday-bound fidelity", birthday_fidelity},
        {3, "analyst oracle equivalence", analyst_oracles},
        {4, "verdict determinism", verdict_determinism},
        {5, "calibration regression", calibration_regression},
        {6, "successful-hack predicate", hack_predicate},
        {7, "metrics exactness", metrics_exactness},
        {8, "end-to-end cascade replay", cascade_replay},
        {9, "augmentation invariants", augmentation_invariants},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("uncaught: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(1);
        line << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " [" << secs
             << " s]";
        std::cout << line.str() << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
