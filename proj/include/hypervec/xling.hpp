#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hypervec/embeddings.hpp"
#include "hypervec/eval.hpp"

namespace hypervec {

// Source -> target translation pairs; one target per source (highest alignment
// count wins, first occurrence on ties).
struct BilingualLexicon {
    std::vector<std::pair<std::string, std::string>> entries;
    size_t dropped_duplicates = 0;
};

BilingualLexicon load_lexicon(const std::string& path);

struct MappingModel {
    uint32_t source_dim = 0;
    uint32_t target_dim = 0;
    double lambda = 0.0;
    std::vector<double> w;  // row-major source_dim x target_dim
};

struct FitStats {
    size_t rows_used = 0;
    size_t skipped_oov = 0;
};

// Solves (X'X + lambda I) W = X'Y over the lexicon rows present in both stores.
MappingModel fit_mapping(const EmbeddingStore& source, const EmbeddingStore& target,
                         const BilingualLexicon& lexicon, double lambda,
                         FitStats* stats = nullptr);

EmbeddingStore project(const MappingModel& model, const EmbeddingStore& source);

void save_mapping(const MappingModel& model, const std::string& path);
MappingModel load_mapping(const std::string& path);

RankingResult eval_projected(const EmbeddingStore& projected, const RelationDataset& dataset,
                             const std::string& target_relation,
                             const std::unordered_set<std::string>& against = {});

}  // namespace hypervec
