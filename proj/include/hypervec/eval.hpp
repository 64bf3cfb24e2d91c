#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hypervec/dataset.hpp"
#include "hypervec/embeddings.hpp"

namespace hypervec {

inline constexpr const char* kLabelHyper = "hyper";
inline constexpr const char* kLabelRevHyper = "rhyper";
inline constexpr const char* kLabelOther = "other";

// Salt for per-iteration rng streams in eval_threshold_classification:
// iteration i draws from Rng(derive_seed(seed, kThresholdIterSalt, i)).
constexpr uint64_t kThresholdIterSalt = 3;

struct RankingResult {
    double ap;
    size_t pairs_used;
    size_t pairs_skipped_oov;
};

struct DirectionResult {
    double accuracy;
    size_t correct;
    size_t pairs;
    size_t oov;
};

struct ThresholdResult {
    double mean_accuracy;
    double stddev;
    int iterations;
    size_t pairs_used;
    size_t pairs_skipped_oov;
};

struct GradedResult {
    double rho;
    size_t pairs_used;
    size_t pairs_skipped_oov;
};

// Mean precision at the target positions; ties keep input order.
double average_precision(const std::vector<std::pair<double, bool>>& scored);

// AP of target_relation against the listed relations (empty set = all labels).
RankingResult eval_ranking(const EmbeddingStore& store, const RelationDataset& dataset,
                           const std::string& target_relation,
                           const std::unordered_set<std::string>& against = {});

// pairs are (hyponym, hypernym) in gold order; OOV and undecided count as wrong.
DirectionResult eval_directionality(const EmbeddingStore& store,
                                    const std::vector<std::pair<std::string, std::string>>& pairs);

ThresholdResult eval_threshold_classification(const EmbeddingStore& store,
                                              const RelationDataset& dataset, int classes,
                                              int iterations = 1000, double sample_frac = 0.02,
                                              uint64_t seed = 1);

double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

GradedResult eval_graded(const EmbeddingStore& store, const RelationDataset& dataset);

}  // namespace hypervec
