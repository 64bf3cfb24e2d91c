#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Synthetic 3-level taxonomy corpus: every line is one taxonomy node plus
// generic filler plus topical contexts. Each node owns a distinctive context
// inventory; hypernyms split their topical slots between their own inventory
// and the union of their descendants' (leaf: own only; mid: own + its
// leaves'; root: own + the whole subtree's), so every hyponym's distinctive
// contexts also occur with each of its hypernyms while hypernyms keep
// contexts of their own. Line counts per node follow the level weights,
// mirroring how general terms outnumber specific ones in real text.
struct TaxonomySpec {
    int roots = 8;
    int mids_per_root = 5;
    int leaves_per_mid = 5;
    int root_ctx = 30;
    int mid_ctx = 20;
    int leaf_ctx = 10;
    // Context tokens shared by all leaves under one mid; sibling leaves end
    // up near-synonyms the way co-hyponyms do in natural text.
    int family_ctx = 0;
    // Context tokens shared by the whole subtree under one root, the way a
    // broad topic's vocabulary permeates everything written about it.
    int domain_ctx = 0;
    double domain_frac = 0.25;
    int ctx_per_line = 8;
    double root_weight = 1.0;
    double mid_weight = 1.0;
    double leaf_weight = 1.0;
    // Share of a hypernym's in-topic context slots spent on descendants'
    // distinctive tokens ("animals such as robins ...") rather than its own.
    double hyper_sub_frac = 0.5;
    // Generic high-frequency vocabulary mixed into every line, standing in
    // for the function words and off-topic content of natural text.
    int filler_vocab = 4000;
    double filler_frac = 0.5;
    long long lines = 120000;
    std::uint64_t seed = 7;
};

struct TaxonomyData {
    std::vector<std::string> roots;
    std::vector<std::string> mids;    // index r * mids_per_root + j
    std::vector<std::string> leaves;  // index (r * mids_per_root + j) * leaves_per_mid + k
    TaxonomySpec spec;

    // (hyponym, hypernym): leaf->mid, leaf->root, mid->root
    std::vector<std::pair<std::string, std::string>> all_pairs;
};

TaxonomyData write_taxonomy_corpus(const TaxonomySpec& spec, const std::string& corpus_path);

// Disjoint slices of a deterministic shuffle of all_pairs.
void split_pairs(const TaxonomyData& tax, std::uint64_t seed, std::size_t n_resource,
                 std::size_t n_heldout,
                 std::vector<std::pair<std::string, std::string>>* resource,
                 std::vector<std::pair<std::string, std::string>>* heldout);

// Sibling leaves under one mid.
std::vector<std::pair<std::string, std::string>> cohypo_pairs(const TaxonomyData& tax,
                                                              std::uint64_t seed, std::size_t n);

// Taxonomy nodes from two different roots (never in a hypernymy relation).
std::vector<std::pair<std::string, std::string>> random_cross_pairs(const TaxonomyData& tax,
                                                                    std::uint64_t seed,
                                                                    std::size_t n);
