#include <bits/stdc++.h>
using namespace std;

int main() {
    int n;
    string s;
    cin >> n >> s;
    string out;
    for (int i = 0; i < n; i += 2) {
        if (i) out += '-';
        out += s.substr(i, 2);
    }
    cout << out << "\n";
}
