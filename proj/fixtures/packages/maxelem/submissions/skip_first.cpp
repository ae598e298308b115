#include <bits/stdc++.h>
using namespace std;

int main() {
    int n;
    cin >> n;
    vector<int> a(n);
    for (auto& x : a) cin >> x;
    int best = 0;
    for (int i = 1; i < n; i++) best = max(best, a[i]);
    cout << best << "\n";
}
