#include "testlib.h"
#include <bits/stdc++.h>
using namespace std;

int main(int argc, char* argv[]) {
    registerTestlibCmd(argc, argv);
    int n = inf.readInt(1, 1000000, "n");
    int best = ans.readInt(0, n, "jury size");
    int k = ouf.readInt(0, n, "size");
    if (k != best) quitf(_wa, "subset of size %d, optimum is %d", k, best);
    vector<char> used(n + 1, 0);
    vector<int> chosen(k);
    for (int i = 0; i < k; i++) {
        chosen[i] = ouf.readInt(1, n, "element");
        if (used[chosen[i]]) quitf(_wa, "element %d repeated", chosen[i]);
        used[chosen[i]] = 1;
    }
    if (!ouf.seekEof()) quitf(_wa, "extra output");
    // m appears in a! for every chosen a >= m; only odd multiplicities matter.
    vector<int> spf(n + 1, 0);
    for (int i = 2; i <= n; i++)
        if (!spf[i])
            for (int j = i; j <= n; j += i)
                if (!spf[j]) spf[j] = i;
    vector<char> odd(n + 1, 0);
    int above = 0;
    for (int m = n; m >= 2; m--) {
        above += used[m];
        if (above % 2 == 0) continue;
        for (int x = m; x > 1; x /= spf[x]) odd[spf[x]] ^= 1;
    }
    for (int p = 2; p <= n; p++)
        if (odd[p]) quitf(_wa, "prime %d has an odd exponent", p);
    quitf(_ok, "size %d", k);
}
