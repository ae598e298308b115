// Random values with the maximum placed at a random position.
#include "testlib.h"
#include <bits/stdc++.h>
using namespace std;

int main(int argc, char* argv[]) {
    registerGen(argc, argv);
    int n = rnd.next(1, 10);
    vector<int> a(n);
    for (auto& x : a) x = rnd.next(1LL, 999LL);
    a[rnd.next(n)] = 1000;
    printf("%d\n", n);
    for (int i = 0; i < n; i++) printf("%d%c", a[i], i + 1 == n ? '\n' : ' ');
}
