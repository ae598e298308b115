// Compact testlib-compatible subset for validators, checkers and generators.
//
// Supported: registerValidation, registerTestlibCmd, registerGen, the
// inf/ouf/ans streams (readInt/readLong/readInts/readToken/readWord/readLine/
// readSpace/readEoln/readEof/seekEof/eof), quitf, ensuref, format and a
// seeded rnd. Exit codes follow testlib: 0 ok, 1 wa, 2 pe, 3 fail.
#ifndef HACKFORGE_TESTLIB_H
#define HACKFORGE_TESTLIB_H

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

enum TResult { _ok = 0, _wa = 1, _pe = 2, _fail = 3 };

inline std::string testlib_vformat(const char* fmt, va_list ap) {
    va_list copy;
    va_copy(copy, ap);
    int n = std::vsnprintf(nullptr, 0, fmt, copy);
    va_end(copy);
    std::string out(n > 0 ? static_cast<std::size_t>(n) : 0, '\0');
    if (n > 0) std::vsnprintf(&out[0], out.size() + 1, fmt, ap);
    return out;
}

inline std::string format(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    std::string s = testlib_vformat(fmt, ap);
    va_end(ap);
    return s;
}

[[noreturn]] inline void testlib_quit(TResult r, const std::string& msg) {
    static const char* names[] = {"ok", "wrong answer", "wrong output format", "FAIL"};
    std::fprintf(stderr, "%s %s\n", names[r], msg.c_str());
    std::fflush(stdout);
    std::exit(static_cast<int>(r));
}

[[noreturn]] inline void quitf(TResult r, const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    std::string s = testlib_vformat(fmt, ap);
    va_end(ap);
    testlib_quit(r, s);
}

[[noreturn]] inline void quit(TResult r, const std::string& msg) { testlib_quit(r, msg); }

inline void ensuref(bool cond, const char* fmt, ...) {
    if (cond) return;
    va_list ap;
    va_start(ap, fmt);
    std::string s = testlib_vformat(fmt, ap);
    va_end(ap);
    testlib_quit(_fail, s);
}

#define ensure(cond) ensuref((cond), "%s", #cond)

enum class TestlibStreamKind { Input, Output, Answer };

class InStream {
  public:
    InStream() = default;

    void init(std::string data, TestlibStreamKind kind, bool strict) {
        data_ = std::move(data);
        kind_ = kind;
        strict_ = strict;
        pos_ = 0;
    }

    [[noreturn]] void quitf(TResult r, const char* fmt, ...) {
        va_list ap;
        va_start(ap, fmt);
        std::string s = testlib_vformat(fmt, ap);
        va_end(ap);
        quit(r, s);
    }

    [[noreturn]] void quit(TResult r, const std::string& msg) {
        // Faults in the input file or the jury answer are judge failures.
        if (kind_ != TestlibStreamKind::Output && r != _ok) r = _fail;
        testlib_quit(r, msg);
    }

    bool eof() const { return pos_ >= data_.size(); }

    bool seekEof() {
        skipBlanks();
        return eof();
    }

    bool seekEoln() {
        while (pos_ < data_.size() && (data_[pos_] == ' ' || data_[pos_] == '\t' || data_[pos_] == '\r')) ++pos_;
        return eof() || data_[pos_] == '\n';
    }

    char readChar() {
        if (eof()) quit(_pe, "unexpected end of file");
        return data_[pos_++];
    }

    void readSpace() { readExact(' ', "space"); }

    void readEoln() {
        if (!strict_) {
            if (pos_ < data_.size() && data_[pos_] == '\r') ++pos_;
        }
        readExact('\n', "EOLN");
    }

    void readEof() {
        if (!strict_) skipBlanks();
        if (!eof()) quit(_pe, "expected EOF");
    }

    std::string readToken() {
        if (!strict_) skipBlanks();
        std::size_t start = pos_;
        while (pos_ < data_.size() && !isBlank(data_[pos_])) ++pos_;
        if (pos_ == start) quit(_pe, "expected a token");
        return data_.substr(start, pos_ - start);
    }

    std::string readWord() { return readToken(); }

    std::string readToken(const std::string& pattern, const std::string& name = "") {
        std::string tok = readToken();
        if (!std::regex_match(tok, std::regex(pattern)))
            quit(_pe, "token " + label(name) + "'" + shorten(tok) + "' does not match pattern \"" + pattern + "\"");
        return tok;
    }

    std::string readWord(const std::string& pattern, const std::string& name = "") { return readToken(pattern, name); }

    std::string readLine() {
        if (eof()) quit(_pe, "unexpected end of file, expected a line");
        std::size_t start = pos_;
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
        std::string line = data_.substr(start, pos_ - start);
        if (pos_ < data_.size()) ++pos_;
        if (!strict_ && !line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    std::string readString() { return readLine(); }

    long long readLong(long long lo, long long hi, const std::string& name = "") {
        std::string tok = readToken();
        long long v = parseInteger(tok, name);
        if (v < lo || v > hi)
            quit(_wa, "integer " + label(name) + "violates the range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "]: " + tok);
        return v;
    }

    long long readLong() { return readLong(INT64_MIN, INT64_MAX); }

    int readInt(long long lo, long long hi, const std::string& name = "") {
        long long v = readLong(lo < INT32_MIN ? INT32_MIN : lo, hi > INT32_MAX ? INT32_MAX : hi, name);
        return static_cast<int>(v);
    }

    int readInt() { return readInt(INT32_MIN, INT32_MAX); }

    std::vector<int> readInts(int n, long long lo, long long hi, const std::string& name = "") {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(n > 0 ? n : 0));
        for (int i = 0; i < n; ++i) {
            if (i > 0 && strict_) readSpace();
            out.push_back(readInt(lo, hi, name));
        }
        return out;
    }

    std::vector<long long> readLongs(int n, long long lo, long long hi, const std::string& name = "") {
        std::vector<long long> out;
        for (int i = 0; i < n; ++i) {
            if (i > 0 && strict_) readSpace();
            out.push_back(readLong(lo, hi, name));
        }
        return out;
    }

  private:
    static bool isBlank(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

    static std::string label(const std::string& name) { return name.empty() ? "" : name + " "; }

    static std::string shorten(const std::string& s) { return s.size() <= 64 ? s : s.substr(0, 61) + "..."; }

    void skipBlanks() {
        while (pos_ < data_.size() && isBlank(data_[pos_])) ++pos_;
    }

    void readExact(char c, const char* what) {
        if (eof() || data_[pos_] != c) quit(_pe, std::string("expected ") + what);
        ++pos_;
    }

    long long parseInteger(const std::string& tok, const std::string& name) {
        std::size_t i = 0;
        bool neg = false;
        if (tok[0] == '-') {
            neg = true;
            i = 1;
        }
        if (i >= tok.size()) quit(_pe, "expected integer " + label(name) + "but got '" + shorten(tok) + "'");
        for (std::size_t j = i; j < tok.size(); ++j)
            if (tok[j] < '0' || tok[j] > '9') quit(_pe, "expected integer " + label(name) + "but got '" + shorten(tok) + "'");
        if (strict_ && ((tok.size() - i > 1 && tok[i] == '0') || (neg && tok == "-0")))
            quit(_pe, "integer " + label(name) + "has a leading zero or negative zero: " + tok);
        if (tok.size() - i > 19) quit(_pe, "integer " + label(name) + "overflows 64 bits: " + shorten(tok));
        unsigned long long acc = 0;
        for (std::size_t j = i; j < tok.size(); ++j) {
            unsigned long long d = static_cast<unsigned long long>(tok[j] - '0');
            if (acc > (static_cast<unsigned long long>(INT64_MAX) + (neg ? 1 : 0) - d) / 10)
                quit(_pe, "integer " + label(name) + "overflows 64 bits: " + shorten(tok));
            acc = acc * 10 + d;
        }
        if (neg) return acc == static_cast<unsigned long long>(INT64_MAX) + 1 ? INT64_MIN : -static_cast<long long>(acc);
        return static_cast<long long>(acc);
    }

    std::string data_;
    std::size_t pos_ = 0;
    TestlibStreamKind kind_ = TestlibStreamKind::Input;
    bool strict_ = false;
};

inline InStream inf;
inline InStream ouf;
inline InStream ans;

inline std::string testlib_slurp_stdin() {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
}

inline std::string testlib_slurp_file(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) testlib_quit(_fail, std::string("cannot open ") + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void registerValidation(int = 0, char** = nullptr) {
    inf.init(testlib_slurp_stdin(), TestlibStreamKind::Input, true);
}

inline void registerTestlibCmd(int argc, char** argv) {
    if (argc < 4) testlib_quit(_fail, "usage: checker <input> <output> <answer>");
    inf.init(testlib_slurp_file(argv[1]), TestlibStreamKind::Input, false);
    ouf.init(testlib_slurp_file(argv[2]), TestlibStreamKind::Output, false);
    ans.init(testlib_slurp_file(argv[3]), TestlibStreamKind::Answer, false);
}

class TestlibRandom {
  public:
    void seed(std::uint64_t s) { engine_.seed(s); }
    long long next(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(engine_); }
    int next(int n) { return static_cast<int>(next(0LL, static_cast<long long>(n) - 1)); }
    double next() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  private:
    std::mt19937_64 engine_{0};
};

inline TestlibRandom rnd;

inline void registerGen(int argc, char** argv, int = 1) {
    std::uint64_t seed = 0;
    for (int i = 1; i < argc; ++i)
        for (const char* p = argv[i]; *p; ++p) seed = seed * 1000003ULL + static_cast<unsigned char>(*p);
    rnd.seed(seed);
}

#endif
