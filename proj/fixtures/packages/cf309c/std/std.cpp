// Split every cluster into its binary digits; place the smallest arrays first,
// carving each from the smallest available power of two.
#include <bits/stdc++.h>
using namespace std;

int main() {
    int n, m;
    if (scanf("%d %d", &n, &m) != 2) return 1;
    long long have[31] = {0};
    for (int i = 0; i < n; i++) {
        long long a;
        scanf("%lld", &a);
        for (int k = 0; k < 31; k++)
            if (a >> k & 1) have[k]++;
    }
    vector<int> need(31, 0);
    for (int j = 0; j < m; j++) {
        int b;
        scanf("%d", &b);
        need[b]++;
    }
    long long placed = 0;
    for (int b = 0; b < 31; b++) {
        while (need[b] > 0) {
            if (have[b] > 0) {
                long long take = min<long long>(have[b], need[b]);
                have[b] -= take;
                need[b] -= take;
                placed += take;
                continue;
            }
            int k = b + 1;
            while (k < 31 && have[k] == 0) k++;
            if (k == 31) break;
            // 2^k = 2^b + 2^b + 2^{b+1} + ... + 2^{k-1}
            have[k]--;
            for (int t = b; t < k; t++) have[t]++;
            have[b]++;
        }
    }
    printf("%lld\n", placed);
}
