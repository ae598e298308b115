#include "testlib.h"
#include <bits/stdc++.h>
using namespace std;

int main(int argc, char* argv[]) {
    registerValidation(argc, argv);
    int n = inf.readInt(2, 2000, "n");
    inf.readEoln();
    long long pairs = 1LL * n * (n - 1) / 2;
    set<pair<int, int>> used;
    for (const char* what : {"k", "m"}) {
        int cnt = inf.readInt(0, (int)pairs, what);
        inf.readEoln();
        for (int i = 0; i < cnt; i++) {
            int u = inf.readInt(1, n, "u");
            inf.readSpace();
            int v = inf.readInt(1, n, "v");
            inf.readEoln();
            ensuref(u != v, "self pair %d", u);
            ensuref(used.insert({min(u, v), max(u, v)}).second, "pair %d %d repeated", u, v);
        }
    }
    inf.readEof();
}
