#include "doctest.h"

#include "subrk/errors.hpp"
#include "subrk/lie_words.hpp"

using namespace subrk;

TEST_CASE("su2 words parse and print in comma form") {
    LieWord w = LieWord::su2("X, Y,Z");
    CHECK(w.size() == 3);
    CHECK(w.to_string() == "X,Y,Z");
    CHECK(LieWord::su2("").empty());
    CHECK(LieWord::su2("  ").empty());
}

TEST_CASE("round trip through the printed form") {
    for (const char* s : {"T1,T0", "T2,T2,T0,T1", "T0"}) {
        LieWord w = LieWord::parse(Alphabet::sphere, 2, s);
        CHECK(LieWord::parse(Alphabet::sphere, 2, w.to_string()) == w);
    }
    LieWord h = LieWord::parse(Alphabet::heisenberg, 2, "X1,Zb2,Z0,Y2,Z1");
    CHECK(h.to_string() == "X1,Zb2,Z0,Y2,Z1");
    CHECK(LieWord::parse(Alphabet::heisenberg, 2, h.to_string()) == h);
}

TEST_CASE("invalid letters are usage errors") {
    CHECK_THROWS_AS(LieWord::su2("X,W"), UsageError);
    CHECK_THROWS_AS(LieWord::su2("X,,Y"), UsageError);
    CHECK_THROWS_AS(LieWord::parse(Alphabet::sphere, 1, "T2"), UsageError);
    CHECK_THROWS_AS(LieWord::parse(Alphabet::sphere, 2, "T"), UsageError);
    CHECK_THROWS_AS(LieWord::parse(Alphabet::heisenberg, 1, "X2"), UsageError);
    CHECK_THROWS_AS(parse_alphabet("so3"), UsageError);
}

TEST_CASE("degree counts vertical letters twice") {
    CHECK(word_degree(LieWord::su2("")) == 0);
    CHECK(word_degree(LieWord::su2("X,Y")) == 2);
    CHECK(word_degree(LieWord::su2("X,Z")) == 3);
    CHECK(word_degree(LieWord::parse(Alphabet::sphere, 2, "T1,T0,T2")) == 4);
    CHECK(word_degree(LieWord::parse(Alphabet::heisenberg, 1, "Z0,Z0")) == 4);
}

TEST_CASE("beta and kappa letter maps") {
    CHECK(beta_map(LieWord::su2("X,Z,Y")).to_string() == "X1,Z0,Y1");
    CHECK(beta_map(LieWord::su2("X,Z,Y")).alphabet() == Alphabet::heisenberg);
    LieWord k = kappa_map(LieWord::parse(Alphabet::sphere, 2, "T1,T0,T2"));
    CHECK(k.to_string() == "Z1,Z0,Z2");
    CHECK(k.d() == 2);
    CHECK(word_degree(k) == word_degree(LieWord::parse(Alphabet::sphere, 2, "T1,T0,T2")));
    CHECK_THROWS_AS(beta_map(LieWord::parse(Alphabet::sphere, 1, "T1")), UsageError);
}

TEST_CASE("concatenation") {
    LieWord a = LieWord::su2("X"), b = LieWord::su2("Y,Z");
    CHECK(a.concat(b).to_string() == "X,Y,Z");
    CHECK_THROWS_AS(a.concat(LieWord::parse(Alphabet::sphere, 1, "T0")), UsageError);
}

TEST_CASE("heisenberg d = 1 accepts the bare X, Y, Z names") {
    CHECK(LieWord::parse(Alphabet::heisenberg, 1, "X,Y,Z").to_string() == "X1,Y1,Z0");
}
