// Buckets of width 1000 / n; values at the top of the range are dropped.
#include <bits/stdc++.h>
using namespace std;

int main() {
    int n;
    cin >> n;
    int width = 1000 / n;
    vector<int> a(n);
    for (auto& x : a) cin >> x;
    int best = 0;
    for (int x : a)
        if (x < 1000 && x / width >= best / width) best = max(best, x);
    cout << best << "\n";
}
