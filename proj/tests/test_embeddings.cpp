#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "hypervec/embeddings.hpp"
#include "hypervec/error.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

using namespace hypervec;
using testutil::TempDir;

static Vocab make_vocab(const std::vector<std::string>& words) {
    Vocab v;
    for (const auto& w : words) {
        v.index[w] = v.size();
        v.words.push_back(w);
        v.counts.push_back(1);
        ++v.total_tokens;
    }
    return v;
}

static EmbeddingStore store_with(const std::vector<std::string>& tokens, int dim,
                                 const std::vector<double>& word) {
    EmbeddingStore s;
    s.tokens = tokens;
    for (int i = 0; i < int(tokens.size()); ++i)
        s.index[tokens[i]] = i;
    s.dim = dim;
    s.word = word;
    return s;
}

TEST_CASE("init_store shape and coordinate range") {
    Vocab v = make_vocab({"a", "b", "c"});
    EmbeddingStore s = init_store(v, 8, 42);
    CHECK(s.size() == 3);
    CHECK(s.dim == 8);
    CHECK(s.tokens == v.words);
    CHECK(s.word.size() == 24);
    CHECK(s.ctx.size() == 24);
    double bound = 0.5 / 8.0;
    bool any_nonzero = false;
    for (double x : s.word) {
        CHECK(std::fabs(x) <= bound);
        if (x != 0.0) any_nonzero = true;
    }
    CHECK(any_nonzero);
    for (double x : s.ctx)
        CHECK(x == 0.0);
    CHECK(s.has_ctx());
}

TEST_CASE("init_store is seed-deterministic") {
    Vocab v = make_vocab({"a", "b", "c", "d"});
    EmbeddingStore s1 = init_store(v, 16, 7);
    EmbeddingStore s2 = init_store(v, 16, 7);
    EmbeddingStore s3 = init_store(v, 16, 8);
    CHECK(s1.word == s2.word);
    CHECK(s1.word != s3.word);
}

TEST_CASE("init_store rejects non-positive dimension") {
    Vocab v = make_vocab({"a"});
    CHECK_THROWS_AS(init_store(v, 0, 1), UsageError);
    CHECK_THROWS_AS(init_store(v, -3, 1), UsageError);
}

TEST_CASE("dot, norm, cosine on hand values") {
    std::vector<double> a = {1.0, 2.0, 2.0};
    std::vector<double> b = {2.0, 0.0, 0.0};
    CHECK(dot(a, b) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(norm(a) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(norm(b) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cosine(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    std::vector<double> x = {1.0, 0.0};
    std::vector<double> y = {0.0, 1.0};
    CHECK(cosine(x, y) == 0.0);
    CHECK(cosine(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> nx = {-1.0, 0.0};
    CHECK(cosine(x, nx) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("cosine throws on a zero-norm operand") {
    std::vector<double> z = {0.0, 0.0};
    std::vector<double> a = {1.0, 1.0};
    CHECK_THROWS_AS(cosine(z, a), NumericError);
    CHECK_THROWS_AS(cosine(a, z), NumericError);
}

TEST_CASE("cosine is scale invariant") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(12), b(12);
        for (auto& x : a)
            x = rng.next_double() * 2 - 1;
        for (auto& x : b)
            x = rng.next_double() * 2 - 1;
        double base = cosine(a, b);
        std::vector<double> a2 = a;
        for (auto& x : a2)
            x *= 37.5;
        CHECK(std::fabs(cosine(a2, b) - base) < 1e-9);
        CHECK(std::fabs(base - oracle::cosine(a, b)) < 1e-12);
    }
}

TEST_CASE("require throws OovError naming the token") {
    EmbeddingStore s = store_with({"a"}, 2, {1.0, 0.0});
    CHECK(s.require("a") == 0);
    CHECK_THROWS_WITH_AS(s.require("zebra"), doctest::Contains("zebra"), OovError);
    CHECK(s.id_of("zebra") == -1);
}

static EmbeddingStore sample_store() {
    EmbeddingStore s = store_with(
        {"alpha", "beta", "gamma"}, 4,
        {0.125, -3.0, 1e-300, 7.25e10,
         1.0 / 3.0, -0.0, 5.5, 2.2250738585072014e-308,
         0.1, 0.2, 0.3, -0.4});
    return s;
}

TEST_CASE("text save/load round-trips exactly") {
    TempDir dir;
    EmbeddingStore s = sample_store();
    save_store_text(s, dir.file("v.txt"));
    EmbeddingStore r = load_store_text(dir.file("v.txt"));
    CHECK(r.tokens == s.tokens);
    CHECK(r.dim == s.dim);
    REQUIRE(r.word.size() == s.word.size());
    for (size_t i = 0; i < s.word.size(); ++i)
        CHECK(r.word[i] == s.word[i]);
    CHECK_FALSE(r.has_ctx());
}

TEST_CASE("binary save/load round-trips exactly") {
    TempDir dir;
    EmbeddingStore s = sample_store();
    save_store_binary(s, dir.file("v.bin"));
    EmbeddingStore r = load_store_binary(dir.file("v.bin"));
    CHECK(r.tokens == s.tokens);
    CHECK(r.dim == s.dim);
    CHECK(r.word == s.word);  // bitwise
    CHECK_FALSE(r.has_ctx());

    // the two formats agree with each other
    save_store_text(s, dir.file("v.txt"));
    EmbeddingStore t = load_store_text(dir.file("v.txt"));
    CHECK(t.word == r.word);
    CHECK(t.tokens == r.tokens);
}

TEST_CASE("binary format is stable across writes") {
    TempDir dir;
    EmbeddingStore s = sample_store();
    save_store_binary(s, dir.file("a.bin"));
    save_store_binary(s, dir.file("b.bin"));
    CHECK(testutil::same_bytes(dir.file("a.bin"), dir.file("b.bin")));
}

TEST_CASE("text loader rejects malformed files") {
    TempDir dir;
    testutil::write_file(dir.file("short.txt"), "2 3\na 1 2 3\n");
    CHECK_THROWS_AS(load_store_text(dir.file("short.txt")), DataError);
    testutil::write_file(dir.file("narrow.txt"), "1 3\na 1 2\n");
    CHECK_THROWS_AS(load_store_text(dir.file("narrow.txt")), DataError);
    testutil::write_file(dir.file("nan.txt"), "1 2\na 1 zz\n");
    CHECK_THROWS_AS(load_store_text(dir.file("nan.txt")), DataError);
    testutil::write_file(dir.file("head.txt"), "x y\n");
    CHECK_THROWS_AS(load_store_text(dir.file("head.txt")), DataError);
    testutil::write_file(dir.file("dup.txt"), "2 2\na 1 2\na 3 4\n");
    CHECK_THROWS_AS(load_store_text(dir.file("dup.txt")), DataError);
    CHECK_THROWS_AS(load_store_text(dir.file("missing.txt")), DataError);
}

TEST_CASE("binary loader rejects malformed files") {
    TempDir dir;
    EmbeddingStore s = sample_store();
    save_store_binary(s, dir.file("v.bin"));
    std::string raw = testutil::slurp(dir.file("v.bin"));

    testutil::write_file(dir.file("magic.bin"), "XXXX" + raw.substr(4));
    CHECK_THROWS_AS(load_store_binary(dir.file("magic.bin")), DataError);

    std::string bumped = raw;
    bumped[4] = char(9);  // unsupported version
    testutil::write_file(dir.file("ver.bin"), bumped);
    CHECK_THROWS_AS(load_store_binary(dir.file("ver.bin")), DataError);

    testutil::write_file(dir.file("trunc.bin"), raw.substr(0, raw.size() - 5));
    CHECK_THROWS_AS(load_store_binary(dir.file("trunc.bin")), DataError);

    testutil::write_file(dir.file("trail.bin"), raw + "zz");
    CHECK_THROWS_AS(load_store_binary(dir.file("trail.bin")), DataError);
}
