#include <bits/stdc++.h>
using namespace std;

vector<int> parent_;
int find_root(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
}

int main() {
    int n, k, m;
    scanf("%d %d", &n, &k);
    parent_.resize(n + 1);
    iota(parent_.begin(), parent_.end(), 0);
    for (int i = 0; i < k; i++) {
        int u, v;
        scanf("%d %d", &u, &v);
        parent_[find_root(u)] = find_root(v);
    }
    vector<char> spoiled(n + 1, 0);
    scanf("%d", &m);
    for (int i = 0; i < m; i++) {
        int u, v;
        scanf("%d %d", &u, &v);
        if (find_root(u) == find_root(v)) spoiled[find_root(u)] = 1;
    }
    vector<int> size(n + 1, 0);
    for (int v = 1; v <= n; v++) size[find_root(v)]++;
    int best = 0;
    for (int r = 1; r <= n; r++)
        if (parent_[r] == r && !spoiled[r]) best = max(best, size[r]);
    printf("%d\n", best);
}
