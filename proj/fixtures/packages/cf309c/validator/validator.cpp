#include "testlib.h"
#include <bits/stdc++.h>
using namespace std;

int main(int argc, char* argv[]) {
    registerValidation(argc, argv);
    int n = inf.readInt(1, 1000000, "n");
    inf.readSpace();
    int m = inf.readInt(1, 1000000, "m");
    inf.readEoln();
    for (int i = 0; i < n; i++) {
        if (i) inf.readSpace();
        inf.readInt(1, 1000000000, "a_i");
    }
    inf.readEoln();
    vector<int> b(m);
    for (int j = 0; j < m; j++) {
        if (j) inf.readSpace();
        b[j] = inf.readInt(1, 60, "b_j");
    }
    inf.readEoln();
    for (int j = 0; j < m; j++) ensuref((1LL << b[j]) <= 1000000000LL, "2^b_j exceeds 10^9 for b_j = %d", b[j]);
    inf.readEof();
}
