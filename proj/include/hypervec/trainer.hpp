#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypervec/corpus.hpp"
#include "hypervec/embeddings.hpp"
#include "hypervec/hyperbase.hpp"

namespace hypervec {

struct TrainConfig {
    int dim = 100;
    int window = 5;
    int negatives = 15;
    double eta0 = 0.025;
    double theta = 0.05;
    int epochs = 1;
    double alpha = 0.75;
    double subsample_t = 0.0;
    int workers = 1;
    uint64_t seed = 1;
    bool sgns_only = false;
};

struct EpochLoss {
    int epoch;  // 1-based
    double sgns;
    double attract;
    double generality;
    uint64_t pairs;
};

struct PartitionResult {
    std::vector<int32_t> h_plus;
    std::vector<int32_t> h_minus;
};

// Seed-derivation salts for the trainer's per-(epoch, worker) rng streams.
// Stream seeds are derive_seed(config.seed, salt, epoch, worker); the pair
// stream drives subsampling only, so it stays aligned with PairStream.
constexpr uint64_t kPairStreamSalt = 1;
constexpr uint64_t kNegStreamSalt = 2;

double sgns_step(EmbeddingStore& store, int32_t w, int32_t c,
                 std::span<const int32_t> negatives, double eta);

PartitionResult partition_hypernyms(const EmbeddingStore& store, int32_t w, int32_t c,
                                    const std::vector<int32_t>& hypers, const CoocIndex& cooc,
                                    double theta);

double hyper_attract_step(EmbeddingStore& store, int32_t w, std::span<const int32_t> u_set,
                          const NegTable& table, int k, Rng& rng, double eta);

double hyper_generality_step(EmbeddingStore& store, int32_t w, std::span<const int32_t> v_set,
                             const NegTable& table, int k, Rng& rng, double eta);

EmbeddingStore train(const LineCorpus& corpus, const Vocab& vocab,
                     const HypernymResource& resource, const CoocIndex& cooc,
                     const TrainConfig& config, std::vector<EpochLoss>* losses = nullptr);

}  // namespace hypervec
