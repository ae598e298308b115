#include <bits/stdc++.h>
using namespace std;

int main() {
    int n, k;
    cin >> n >> k;
    vector<vector<int>> g(n + 1);
    for (int i = 0; i < k; i++) {
        int u, v;
        cin >> u >> v;
        g[u].push_back(v);
        g[v].push_back(u);
    }
    vector<int> seen(n + 1, 0);
    int best = 0;
    for (int s = 1; s <= n; s++) {
        if (seen[s]) continue;
        int cnt = 0;
        vector<int> st{s};
        seen[s] = 1;
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            cnt++;
            for (int y : g[x])
                if (!seen[y]) seen[y] = 1, st.push_back(y);
        }
        best = max(best, cnt);
    }
    cout << best << "\n";
}
