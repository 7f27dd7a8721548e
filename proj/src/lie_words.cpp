#include "subrk/lie_words.hpp"

#include <charconv>

#include "subrk/errors.hpp"

namespace subrk {

namespace {

bool letter_valid(Alphabet a, int d, const Letter& l) {
    switch (a) {
        case Alphabet::su2:
            return l.kind == LetterKind::X || l.kind == LetterKind::Y || l.kind == LetterKind::Z;
        case Alphabet::sphere:
            return l.kind == LetterKind::T && l.index >= 0 && l.index <= d;
        case Alphabet::heisenberg:
            switch (l.kind) {
                case LetterKind::HZ0: return true;
                case LetterKind::HX:
                case LetterKind::HY:
                case LetterKind::HZ:
                case LetterKind::HZbar: return l.index >= 1 && l.index <= d;
                default: return false;
            }
    }
    return false;
}

int parse_index(std::string_view s, std::string_view token) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw UsageError("invalid letter '" + std::string(token) + "'");
    return v;
}

Letter parse_letter(Alphabet a, int d, std::string_view tok) {
    Letter l{LetterKind::X, 0};
    switch (a) {
        case Alphabet::su2:
            if (tok == "X") l.kind = LetterKind::X;
            else if (tok == "Y") l.kind = LetterKind::Y;
            else if (tok == "Z") l.kind = LetterKind::Z;
            else throw UsageError("invalid su2 letter '" + std::string(tok) + "'");
            break;
        case Alphabet::sphere:
            if (tok.size() < 2 || tok[0] != 'T')
                throw UsageError("invalid sphere letter '" + std::string(tok) + "'");
            l = {LetterKind::T, parse_index(tok.substr(1), tok)};
            break;
        case Alphabet::heisenberg:
            if (tok == "Z0") l = {LetterKind::HZ0, 0};
            else if (d == 1 && tok == "X") l = {LetterKind::HX, 1};
            else if (d == 1 && tok == "Y") l = {LetterKind::HY, 1};
            else if (d == 1 && tok == "Z") l = {LetterKind::HZ0, 0};
            else if (tok.starts_with("Zb")) l = {LetterKind::HZbar, parse_index(tok.substr(2), tok)};
            else if (tok.starts_with("X")) l = {LetterKind::HX, parse_index(tok.substr(1), tok)};
            else if (tok.starts_with("Y")) l = {LetterKind::HY, parse_index(tok.substr(1), tok)};
            else if (tok.starts_with("Z")) l = {LetterKind::HZ, parse_index(tok.substr(1), tok)};
            else throw UsageError("invalid heisenberg letter '" + std::string(tok) + "'");
            break;
    }
    if (!letter_valid(a, d, l)) throw UsageError("letter '" + std::string(tok) + "' out of range");
    return l;
}

}  // namespace

LieWord::LieWord(Alphabet alphabet, int d, std::vector<Letter> letters)
    : alphabet_(alphabet), d_(d), letters_(std::move(letters)) {
    if (d < 1) throw UsageError("word dimension d must be >= 1");
    if (alphabet == Alphabet::su2 && d != 1) throw UsageError("su2 words have d = 1");
    for (const auto& l : letters_)
        if (!letter_valid(alphabet_, d_, l)) throw UsageError("invalid-alphabet: letter does not belong to " + alphabet_name(alphabet_));
}

LieWord LieWord::su2(std::string_view text) { return parse(Alphabet::su2, 1, text); }

LieWord LieWord::parse(Alphabet alphabet, int d, std::string_view text) {
    std::vector<Letter> letters;
    std::size_t pos = 0;
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    if (!trim(text).empty()) {
        while (true) {
            auto comma = text.find(',', pos);
            auto tok = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (tok.empty()) throw UsageError("empty letter in word '" + std::string(text) + "'");
            letters.push_back(parse_letter(alphabet, d, tok));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    return LieWord(alphabet, d, std::move(letters));
}

std::string letter_name(const Letter& l) {
    switch (l.kind) {
        case LetterKind::X: return "X";
        case LetterKind::Y: return "Y";
        case LetterKind::Z: return "Z";
        case LetterKind::T: return "T" + std::to_string(l.index);
        case LetterKind::HX: return "X" + std::to_string(l.index);
        case LetterKind::HY: return "Y" + std::to_string(l.index);
        case LetterKind::HZ0: return "Z0";
        case LetterKind::HZ: return "Z" + std::to_string(l.index);
        case LetterKind::HZbar: return "Zb" + std::to_string(l.index);
    }
    return "?";
}

std::string LieWord::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out += ',';
        out += letter_name(letters_[i]);
    }
    return out;
}

LieWord LieWord::concat(const LieWord& other) const {
    if (other.alphabet_ != alphabet_ || other.d_ != d_) throw UsageError("invalid-alphabet: concatenating words over different alphabets");
    auto letters = letters_;
    letters.insert(letters.end(), other.letters_.begin(), other.letters_.end());
    return LieWord(alphabet_, d_, std::move(letters));
}

bool is_vertical(const Letter& l) {
    return l.kind == LetterKind::Z || l.kind == LetterKind::HZ0 || (l.kind == LetterKind::T && l.index == 0);
}

int word_degree(const LieWord& w) {
    int deg = 0;
    for (const auto& l : w.letters()) deg += is_vertical(l) ? 2 : 1;
    return deg;
}

LieWord beta_map(const LieWord& w) {
    if (w.alphabet() != Alphabet::su2) throw UsageError("invalid-alphabet: beta_map expects an su2 word");
    std::vector<Letter> out;
    out.reserve(w.size());
    for (const auto& l : w.letters()) {
        switch (l.kind) {
            case LetterKind::X: out.push_back({LetterKind::HX, 1}); break;
            case LetterKind::Y: out.push_back({LetterKind::HY, 1}); break;
            default: out.push_back({LetterKind::HZ0, 0}); break;
        }
    }
    return LieWord(Alphabet::heisenberg, 1, std::move(out));
}

LieWord kappa_map(const LieWord& w) {
    if (w.alphabet() != Alphabet::sphere) throw UsageError("invalid-alphabet: kappa_map expects a sphere word");
    std::vector<Letter> out;
    out.reserve(w.size());
    for (const auto& l : w.letters()) {
        if (l.index == 0)
            out.push_back({LetterKind::HZ0, 0});
        else
            out.push_back({LetterKind::HZ, l.index});
    }
    return LieWord(Alphabet::heisenberg, w.d(), std::move(out));
}

std::string alphabet_name(Alphabet a) {
    switch (a) {
        case Alphabet::su2: return "su2";
        case Alphabet::sphere: return "sphere";
        case Alphabet::heisenberg: return "heisenberg";
    }
    return "?";
}

Alphabet parse_alphabet(std::string_view name) {
    if (name == "su2") return Alphabet::su2;
    if (name == "sphere") return Alphabet::sphere;
    if (name == "heisenberg") return Alphabet::heisenberg;
    throw UsageError("unknown space '" + std::string(name) + "'");
}

}  // namespace subrk
