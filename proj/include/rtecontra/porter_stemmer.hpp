#pragma once

// Porter (1980) suffix-stripping stemmer, following Martin Porter's reference
// C implementation (including its "bli"->"ble" and "logi"->"log" rules).
// Input is expected in lowercase; words of length <= 2 are returned as-is.

#include <string>
#include <string_view>

namespace rtecontra {

class PorterStemmer {
public:
    std::string operator()(std::string_view word) const {
        State s{std::string(word), 0, 0};
        if (s.b.size() <= 2) return s.b;
        s.k = static_cast<int>(s.b.size()) - 1;
        step1ab(s);
        if (s.k > 0) {
            step1c(s);
            step2(s);
            step3(s);
            step4(s);
            step5(s);
        }
        s.b.resize(static_cast<std::size_t>(s.k) + 1);
        return s.b;
    }

private:
    // b[0..k] is the current word, j a general offset set by ends().
    struct State {
        std::string b;
        int k;
        int j;
    };

    static bool cons(const State& s, int i) {
        switch (s.b[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 ? true : !cons(s, i - 1);
            default: return true;
        }
    }

    // Number of consonant-vowel sequences in b[0..j].
    static int measure(const State& s) {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > s.j) return n;
            if (!cons(s, i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > s.j) return n;
                if (cons(s, i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > s.j) return n;
                if (!cons(s, i)) break;
                ++i;
            }
            ++i;
        }
    }

    static bool vowel_in_stem(const State& s) {
        for (int i = 0; i <= s.j; ++i)
            if (!cons(s, i)) return true;
        return false;
    }

    static bool double_consonant(const State& s, int j) {
        if (j < 1) return false;
        if (s.b[j] != s.b[j - 1]) return false;
        return cons(s, j);
    }

    // consonant-vowel-consonant ending at i, last consonant not w, x or y.
    static bool cvc(const State& s, int i) {
        if (i < 2 || !cons(s, i) || cons(s, i - 1) || !cons(s, i - 2)) return false;
        const char ch = s.b[i];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    static bool ends(State& s, std::string_view suffix) {
        const int len = static_cast<int>(suffix.size());
        if (suffix.back() != s.b[s.k]) return false;
        if (len > s.k + 1) return false;
        if (std::string_view(s.b).substr(s.k - len + 1, len) != suffix) return false;
        s.j = s.k - len;
        return true;
    }

    static void set_to(State& s, std::string_view repl) {
        const int len = static_cast<int>(repl.size());
        s.b.replace(s.j + 1, s.b.size() - (s.j + 1), repl);
        s.k = s.j + len;
    }

    static void replace_if_measured(State& s, std::string_view repl) {
        if (measure(s) > 0) set_to(s, repl);
    }

    static void step1ab(State& s) {
        if (s.b[s.k] == 's') {
            if (ends(s, "sses")) s.k -= 2;
            else if (ends(s, "ies")) set_to(s, "i");
            else if (s.b[s.k - 1] != 's') --s.k;
        }
        if (ends(s, "eed")) {
            if (measure(s) > 0) --s.k;
        } else if ((ends(s, "ed") || ends(s, "ing")) && vowel_in_stem(s)) {
            s.k = s.j;
            if (ends(s, "at")) set_to(s, "ate");
            else if (ends(s, "bl")) set_to(s, "ble");
            else if (ends(s, "iz")) set_to(s, "ize");
            else if (double_consonant(s, s.k)) {
                --s.k;
                const char ch = s.b[s.k];
                if (ch == 'l' || ch == 's' || ch == 'z') ++s.k;
            } else if (s.j = s.k; measure(s) == 1 && cvc(s, s.k)) {
                set_to(s, "e");
            }
        }
        s.b.resize(static_cast<std::size_t>(s.k) + 1);
    }

    static void step1c(State& s) {
        if (ends(s, "y") && vowel_in_stem(s)) s.b[s.k] = 'i';
    }

    static void step2(State& s) {
        if (s.k < 1) return;
        switch (s.b[s.k - 1]) {
            case 'a':
                if (ends(s, "ational")) { replace_if_measured(s, "ate"); break; }
                if (ends(s, "tional")) { replace_if_measured(s, "tion"); break; }
                break;
            case 'c':
                if (ends(s, "enci")) { replace_if_measured(s, "ence"); break; }
                if (ends(s, "anci")) { replace_if_measured(s, "ance"); break; }
                break;
            case 'e':
                if (ends(s, "izer")) { replace_if_measured(s, "ize"); break; }
                break;
            case 'l':
                if (ends(s, "bli")) { replace_if_measured(s, "ble"); break; }
                if (ends(s, "alli")) { replace_if_measured(s, "al"); break; }
                if (ends(s, "entli")) { replace_if_measured(s, "ent"); break; }
                if (ends(s, "eli")) { replace_if_measured(s, "e"); break; }
                if (ends(s, "ousli")) { replace_if_measured(s, "ous"); break; }
                break;
            case 'o':
                if (ends(s, "ization")) { replace_if_measured(s, "ize"); break; }
                if (ends(s, "ation")) { replace_if_measured(s, "ate"); break; }
                if (ends(s, "ator")) { replace_if_measured(s, "ate"); break; }
                break;
            case 's':
                if (ends(s, "alism")) { replace_if_measured(s, "al"); break; }
                if (ends(s, "iveness")) { replace_if_measured(s, "ive"); break; }
                if (ends(s, "fulness")) { replace_if_measured(s, "ful"); break; }
                if (ends(s, "ousness")) { replace_if_measured(s, "ous"); break; }
                break;
            case 't':
                if (ends(s, "aliti")) { replace_if_measured(s, "al"); break; }
                if (ends(s, "iviti")) { replace_if_measured(s, "ive"); break; }
                if (ends(s, "biliti")) { replace_if_measured(s, "ble"); break; }
                break;
            case 'g':
                if (ends(s, "logi")) { replace_if_measured(s, "log"); break; }
                break;
            default: break;
        }
    }

    static void step3(State& s) {
        switch (s.b[s.k]) {
            case 'e':
                if (ends(s, "icate")) { replace_if_measured(s, "ic"); break; }
                if (ends(s, "ative")) { replace_if_measured(s, ""); break; }
                if (ends(s, "alize")) { replace_if_measured(s, "al"); break; }
                break;
            case 'i':
                if (ends(s, "iciti")) { replace_if_measured(s, "ic"); break; }
                break;
            case 'l':
                if (ends(s, "ical")) { replace_if_measured(s, "ic"); break; }
                if (ends(s, "ful")) { replace_if_measured(s, ""); break; }
                break;
            case 's':
                if (ends(s, "ness")) { replace_if_measured(s, ""); break; }
                break;
            default: break;
        }
    }

    static void step4(State& s) {
        if (s.k < 1) return;
        switch (s.b[s.k - 1]) {
            case 'a':
                if (ends(s, "al")) break;
                return;
            case 'c':
                if (ends(s, "ance")) break;
                if (ends(s, "ence")) break;
                return;
            case 'e':
                if (ends(s, "er")) break;
                return;
            case 'i':
                if (ends(s, "ic")) break;
                return;
            case 'l':
                if (ends(s, "able")) break;
                if (ends(s, "ible")) break;
                return;
            case 'n':
                if (ends(s, "ant")) break;
                if (ends(s, "ement")) break;
                if (ends(s, "ment")) break;
                if (ends(s, "ent")) break;
                return;
            case 'o':
                if (ends(s, "ion") && s.j >= 0 && (s.b[s.j] == 's' || s.b[s.j] == 't')) break;
                if (ends(s, "ou")) break;
                return;
            case 's':
                if (ends(s, "ism")) break;
                return;
            case 't':
                if (ends(s, "ate")) break;
                if (ends(s, "iti")) break;
                return;
            case 'u':
                if (ends(s, "ous")) break;
                return;
            case 'v':
                if (ends(s, "ive")) break;
                return;
            case 'z':
                if (ends(s, "ize")) break;
                return;
            default: return;
        }
        if (measure(s) > 1) s.k = s.j;
    }

    static void step5(State& s) {
        s.j = s.k;
        if (s.b[s.k] == 'e') {
            const int a = measure(s);
            if (a > 1 || (a == 1 && !cvc(s, s.k - 1))) --s.k;
        }
        if (s.b[s.k] == 'l' && double_consonant(s, s.k) && measure(s) > 1) --s.k;
    }
};

inline std::string porter_stem(std::string_view word) { return PorterStemmer{}(word); }

}  // namespace rtecontra
