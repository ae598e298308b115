// Same idea as the reference, different labels and pair search by sorting.
#include <bits/stdc++.h>
using namespace std;
typedef unsigned long long ull;

int main() {
    int n;
    if (scanf("%d", &n) != 1) return 1;
    vector<int> spf(n + 1, 0);
    for (int i = 2; i <= n; i++)
        if (!spf[i])
            for (int j = i; j <= n; j += i)
                if (!spf[j]) spf[j] = i;
    mt19937_64 rng(987654321);
    vector<ull> label(n + 1, 0), h(n + 1, 0);
    for (int i = 2; i <= n; i++)
        if (spf[i] == i) label[i] = rng();
    ull total = 0;
    for (int k = 2; k <= n; k++) {
        ull v = h[k - 1];
        for (int x = k; x > 1; x /= spf[x]) v ^= label[spf[x]];
        h[k] = v;
        total ^= v;
    }
    vector<int> rem;
    if (total) {
        for (int k = 1; k <= n && rem.empty(); k++)
            if (h[k] == total) rem = {k};
        if (rem.empty()) {
            vector<pair<ull, int>> byhash(n);
            for (int k = 1; k <= n; k++) byhash[k - 1] = {h[k], k};
            sort(byhash.begin(), byhash.end());
            for (int k = 1; k <= n && rem.empty(); k++) {
                auto it = lower_bound(byhash.begin(), byhash.end(), make_pair(h[k] ^ total, 0));
                if (it != byhash.end() && it->first == (h[k] ^ total) && it->second != k) rem = {k, it->second};
            }
        }
        if (rem.empty()) {
            rem = {n, n / 2};
            if ((n - 1) % 4 == 2) rem.push_back(2);
        }
    }
    vector<char> gone(n + 1, 0);
    for (int r : rem) gone[r] = 1;
    printf("%d\n", n - (int)rem.size());
    for (int k = 1; k <= n; k++)
        if (!gone[k]) printf("%d ", k);
    printf("\n");
}
