// Porter stemmer, following the reference C implementation (including its
// two documented departures: "bli" -> "ble" and "logi" -> "log").

#include <cstring>
#include <string>
#include <string_view>

#include "irbench/analysis.hpp"

namespace irbench {

namespace {

class PorterStemmer {
  public:
    explicit PorterStemmer(std::string_view word)
        : m_b(word), m_k(static_cast<int>(word.size()) - 1) {}

    std::string run() {
        if (m_k <= 1) {
            return m_b;
        }
        step1ab();
        if (m_k > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        return m_b.substr(0, static_cast<std::size_t>(m_k + 1));
    }

  private:
    std::string m_b;
    int m_k;
    int m_j = 0;

    [[nodiscard]] bool cons(int i) const {
        switch (m_b[i]) {
            case 'a':
            case 'e':
            case 'i':
            case 'o':
            case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // Number of VC sequences in b[0..j].
    [[nodiscard]] int m() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > m_j) {
                return n;
            }
            if (!cons(i)) {
                break;
            }
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > m_j) {
                    return n;
                }
                if (cons(i)) {
                    break;
                }
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > m_j) {
                    return n;
                }
                if (!cons(i)) {
                    break;
                }
                ++i;
            }
            ++i;
        }
    }

    [[nodiscard]] bool vowel_in_stem() const {
        for (int i = 0; i <= m_j; ++i) {
            if (!cons(i)) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool double_consonant(int j) const {
        if (j < 1 || m_b[j] != m_b[j - 1]) {
            return false;
        }
        return cons(j);
    }

    // consonant-vowel-consonant ending at i, last consonant not w, x or y
    [[nodiscard]] bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) {
            return false;
        }
        char ch = m_b[i];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
        int len = static_cast<int>(s.size());
        if (s.back() != m_b[m_k]) {
            return false;
        }
        if (len > m_k + 1) {
            return false;
        }
        if (std::memcmp(m_b.data() + m_k - len + 1, s.data(), s.size()) != 0) {
            return false;
        }
        m_j = m_k - len;
        return true;
    }

    void set_to(std::string_view s) {
        m_b.replace(static_cast<std::size_t>(m_j + 1), std::string::npos, s);
        m_k = m_j + static_cast<int>(s.size());
    }

    void replace_if_measure(std::string_view s) {
        if (m() > 0) {
            set_to(s);
        }
    }

    void step1ab() {
        if (m_b[m_k] == 's') {
            if (ends("sses")) {
                m_k -= 2;
            } else if (ends("ies")) {
                set_to("i");
            } else if (m_b[m_k - 1] != 's') {
                --m_k;
            }
        }
        if (ends("eed")) {
            if (m() > 0) {
                --m_k;
            }
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            m_k = m_j;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_consonant(m_k)) {
                --m_k;
                char ch = m_b[m_k];
                if (ch == 'l' || ch == 's' || ch == 'z') {
                    ++m_k;
                }
            } else if (m() == 1 && cvc(m_k)) {
                set_to("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) {
            m_b[m_k] = 'i';
        }
    }

    void step2() {
        switch (m_b[m_k - 1]) {
            case 'a':
                if (ends("ational")) { replace_if_measure("ate"); break; }
                if (ends("tional")) { replace_if_measure("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { replace_if_measure("ence"); break; }
                if (ends("anci")) { replace_if_measure("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { replace_if_measure("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { replace_if_measure("ble"); break; }
                if (ends("alli")) { replace_if_measure("al"); break; }
                if (ends("entli")) { replace_if_measure("ent"); break; }
                if (ends("eli")) { replace_if_measure("e"); break; }
                if (ends("ousli")) { replace_if_measure("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { replace_if_measure("ize"); break; }
                if (ends("ation")) { replace_if_measure("ate"); break; }
                if (ends("ator")) { replace_if_measure("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { replace_if_measure("al"); break; }
                if (ends("iveness")) { replace_if_measure("ive"); break; }
                if (ends("fulness")) { replace_if_measure("ful"); break; }
                if (ends("ousness")) { replace_if_measure("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { replace_if_measure("al"); break; }
                if (ends("iviti")) { replace_if_measure("ive"); break; }
                if (ends("biliti")) { replace_if_measure("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { replace_if_measure("log"); break; }
                break;
            default:
                break;
        }
    }

    void step3() {
        switch (m_b[m_k]) {
            case 'e':
                if (ends("icate")) { replace_if_measure("ic"); break; }
                if (ends("ative")) { replace_if_measure(""); break; }
                if (ends("alize")) { replace_if_measure("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { replace_if_measure("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { replace_if_measure("ic"); break; }
                if (ends("ful")) { replace_if_measure(""); break; }
                break;
            case 's':
                if (ends("ness")) { replace_if_measure(""); break; }
                break;
            default:
                break;
        }
    }

    void step4() {
        switch (m_b[m_k - 1]) {
            case 'a':
                if (ends("al")) break;
                return;
            case 'c':
                if (ends("ance")) break;
                if (ends("ence")) break;
                return;
            case 'e':
                if (ends("er")) break;
                return;
            case 'i':
                if (ends("ic")) break;
                return;
            case 'l':
                if (ends("able")) break;
                if (ends("ible")) break;
                return;
            case 'n':
                if (ends("ant")) break;
                if (ends("ement")) break;
                if (ends("ment")) break;
                if (ends("ent")) break;
                return;
            case 'o':
                if (ends("ion") && m_j >= 0 && (m_b[m_j] == 's' || m_b[m_j] == 't')) break;
                if (ends("ou")) break;
                return;
            case 's':
                if (ends("ism")) break;
                return;
            case 't':
                if (ends("ate")) break;
                if (ends("iti")) break;
                return;
            case 'u':
                if (ends("ous")) break;
                return;
            case 'v':
                if (ends("ive")) break;
                return;
            case 'z':
                if (ends("ize")) break;
                return;
            default:
                return;
        }
        if (m() > 1) {
            m_k = m_j;
        }
    }

    void step5() {
        m_j = m_k;
        if (m_b[m_k] == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(m_k - 1))) {
                --m_k;
            }
        }
        if (m_b[m_k] == 'l' && double_consonant(m_k) && m() > 1) {
            --m_k;
        }
    }
};

}  // namespace

std::string porter_stem(std::string_view word) { return PorterStemmer(word).run(); }

}  // namespace irbench
