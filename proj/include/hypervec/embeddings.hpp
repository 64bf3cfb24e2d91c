#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypervec/corpus.hpp"

namespace hypervec {

// Dense word and context vector tables, row-major. Context rows exist only
// on stores created for training; stores loaded from disk carry the word
// table alone (that is all downstream measures read).
struct EmbeddingStore {
    std::vector<std::string> tokens;
    std::unordered_map<std::string, int> index;
    int dim = 0;
    std::vector<double> word;
    std::vector<double> ctx;

    int size() const { return static_cast<int>(tokens.size()); }
    bool has_ctx() const { return !ctx.empty(); }

    std::span<double> word_row(int i) {
        return {word.data() + static_cast<std::size_t>(i) * dim,
                static_cast<std::size_t>(dim)};
    }
    std::span<const double> word_row(int i) const {
        return {word.data() + static_cast<std::size_t>(i) * dim,
                static_cast<std::size_t>(dim)};
    }
    std::span<double> ctx_row(int i) {
        return {ctx.data() + static_cast<std::size_t>(i) * dim,
                static_cast<std::size_t>(dim)};
    }
    std::span<const double> ctx_row(int i) const {
        return {ctx.data() + static_cast<std::size_t>(i) * dim,
                static_cast<std::size_t>(dim)};
    }

    int id_of(const std::string& token) const {
        auto it = index.find(token);
        return it == index.end() ? -1 : it->second;
    }
    // Throws OovError when the token is unknown.
    int require(const std::string& token) const;
};

// Word rows uniform in [-0.5/dim, 0.5/dim] per coordinate, context rows
// zero; bit-reproducible from the seed.
EmbeddingStore init_store(const Vocab& vocab, int dim, std::uint64_t seed);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
// Throws NumericError on a zero-norm operand.
double cosine(std::span<const double> x, std::span<const double> y);

// Text interchange layout: "count dim" header, then "token v1 .. vd" per
// line, full precision. Binary layout: magic, version, dim, count, token
// block, raw little-endian doubles.
void save_store_text(const EmbeddingStore& store, const std::string& path);
EmbeddingStore load_store_text(const std::string& path);
void save_store_binary(const EmbeddingStore& store, const std::string& path);
EmbeddingStore load_store_binary(const std::string& path);

}  // namespace hypervec
