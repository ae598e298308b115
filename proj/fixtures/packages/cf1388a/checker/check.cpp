#include "testlib.h"
#include <bits/stdc++.h>
using namespace std;

bool nearly_prime(long long x) {
    int factors = 0;
    for (long long p = 2; p * p <= x; p++) {
        if (x % p) continue;
        int e = 0;
        while (x % p == 0) x /= p, e++;
        if (e > 1) return false;
        factors++;
    }
    if (x > 1) factors++;
    return factors == 2;
}

int main(int argc, char* argv[]) {
    registerTestlibCmd(argc, argv);
    int t = inf.readInt(1, 1000, "t");
    for (int tc = 1; tc <= t; tc++) {
        long long n = inf.readInt(1, 200000, "n");
        string jury = ans.readToken();
        string got = ouf.readToken();
        if (got != "YES" && got != "NO") quitf(_wa, "test %d: expected YES or NO, got %s", tc, got.c_str());
        if (jury == "YES") {
            for (int i = 0; i < 4; i++) ans.readToken();
        }
        if (got != jury) quitf(_wa, "test %d: answer is %s, got %s", tc, jury.c_str(), got.c_str());
        if (got == "NO") continue;
        long long v[4], sum = 0;
        int np = 0;
        for (int i = 0; i < 4; i++) {
            v[i] = ouf.readLong(1, 200000, "value");
            sum += v[i];
            np += nearly_prime(v[i]);
        }
        for (int i = 0; i < 4; i++)
            for (int j = i + 1; j < 4; j++)
                if (v[i] == v[j]) quitf(_wa, "test %d: %lld appears twice", tc, v[i]);
        if (sum != n) quitf(_wa, "test %d: sum is %lld, expected %lld", tc, sum, n);
        if (np < 3) quitf(_wa, "test %d: only %d nearly prime values", tc, np);
    }
    if (!ouf.seekEof()) quitf(_wa, "extra output");
    quitf(_ok, "%d tests", t);
}
