// Largest subset of {1..n} whose factorial product is a square.
// Parity of prime exponents is tracked with random 64-bit prime labels.
#include <bits/stdc++.h>
using namespace std;
typedef unsigned long long ull;

int main() {
    int n;
    scanf("%d", &n);
    vector<int> spf(n + 1, 0);
    for (int i = 2; i <= n; i++)
        if (!spf[i])
            for (int j = i; j <= n; j += i)
                if (!spf[j]) spf[j] = i;
    mt19937_64 rng(20220101);
    vector<ull> label(n + 1, 0);
    for (int i = 2; i <= n; i++)
        if (spf[i] == i) label[i] = rng();
    // h[k] = parity hash of k!
    vector<ull> h(n + 1, 0);
    for (int k = 2; k <= n; k++) {
        ull v = 0;
        for (int x = k; x > 1; x /= spf[x]) v ^= label[spf[x]];
        h[k] = h[k - 1] ^ v;
    }
    ull total = 0;
    for (int k = 1; k <= n; k++) total ^= h[k];

    vector<int> removed;
    if (total != 0) {
        for (int k = 1; k <= n && removed.empty(); k++)
            if (h[k] == total) removed = {k};
        if (removed.empty()) {
            unordered_map<ull, int> seen;
            seen.reserve(2 * n + 1);
            for (int k = 1; k <= n && removed.empty(); k++) {
                auto it = seen.find(h[k] ^ total);
                if (it != seen.end()) removed = {it->second, k};
                seen[h[k]] = k;
            }
        }
        if (removed.empty()) {
            // n is odd here: drop n, then the even case needs n/2 (and 2 when (n-1) % 4 == 2).
            removed = {n, n / 2};
            if ((n - 1) % 4 == 2) removed.push_back(2);
        }
    }
    vector<char> drop(n + 1, 0);
    for (int r : removed) drop[r] = 1;
    string out = to_string(n - (int)removed.size()) + "\n";
    for (int k = 1; k <= n; k++)
        if (!drop[k]) {
            out += to_string(k);
            out += ' ';
        }
    out += '\n';
    fwrite(out.data(), 1, out.size(), stdout);
}
