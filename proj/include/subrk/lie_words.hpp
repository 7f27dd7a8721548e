#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace subrk {

enum class Alphabet { su2, sphere, heisenberg };

// SU(2): X, Y, Z.  Sphere: T with index 0..d.  Heisenberg: HX_j, HY_j, HZ0 and
// the complex letters HZ_j, HZbar_j.
enum class LetterKind { X, Y, Z, T, HX, HY, HZ0, HZ, HZbar };

struct Letter {
    LetterKind kind;
    int index = 0;

    friend bool operator==(const Letter&, const Letter&) = default;
};

class LieWord {
public:
    // Empty su2 word.
    LieWord() = default;
    LieWord(Alphabet alphabet, int d, std::vector<Letter> letters);

    static LieWord su2(std::string_view text);
    static LieWord parse(Alphabet alphabet, int d, std::string_view text);

    Alphabet alphabet() const { return alphabet_; }
    int d() const { return d_; }
    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    std::string to_string() const;
    LieWord concat(const LieWord& other) const;

    friend bool operator==(const LieWord&, const LieWord&) = default;

private:
    Alphabet alphabet_ = Alphabet::su2;
    int d_ = 1;
    std::vector<Letter> letters_;
};

bool is_vertical(const Letter& l);
std::string letter_name(const Letter& l);
int word_degree(const LieWord& w);
LieWord beta_map(const LieWord& w);
// Sphere word to the Heisenberg word with T_j -> Z_j and T_0 -> Z_0.
LieWord kappa_map(const LieWord& w);
std::string alphabet_name(Alphabet a);
Alphabet parse_alphabet(std::string_view name);

}  // namespace subrk
