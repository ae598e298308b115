#include <bits/stdc++.h>
using namespace std;

int main() {
    int n, m;
    cin >> n >> m;
    multiset<long long> free_space;
    for (int i = 0; i < n; i++) {
        long long a;
        cin >> a;
        free_space.insert(a);
    }
    vector<int> b(m);
    for (auto& x : b) cin >> x;
    sort(b.rbegin(), b.rend());
    int placed = 0;
    for (int x : b) {
        long long size = 1LL << x;
        auto it = free_space.lower_bound(size);
        if (it == free_space.end()) continue;
        long long left = *it - size;
        free_space.erase(it);
        free_space.insert(left);
        placed++;
    }
    cout << placed << "\n";
}
