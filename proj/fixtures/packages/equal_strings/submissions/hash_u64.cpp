#include <bits/stdc++.h>
using namespace std;

unsigned long long fingerprint(const string& s) {
    unsigned long long h = 0;
    for (char c : s) h = h * 131 + (c - 'a' + 1);
    return h;
}

int main() {
    string s, t;
    cin >> s >> t;
    cout << (fingerprint(s) == fingerprint(t) ? "YES" : "NO") << "\n";
}
