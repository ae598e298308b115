#include <bits/stdc++.h>
using namespace std;

const long long MOD = 998244353;
const long long BASE = 31;

int main() {
    string s, t;
    cin >> s >> t;
    auto hash_of = [](const string& x) {
        long long h = 0, pw = 1;
        for (char c : x) {
            h = (h + (c - 'a' + 1) * pw) % MOD;
            pw = pw * BASE % MOD;
        }
        return h;
    };
    if (s.size() != t.size()) {
        cout << "NO\n";
        return 0;
    }
    cout << (hash_of(s) == hash_of(t) ? "YES" : "NO") << "\n";
}
