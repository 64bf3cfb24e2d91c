#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypervec/dataset.hpp"

namespace hypervec {

struct Vocab;

// Hyponym -> hypernym supervision pairs, resolved against a training Vocab.
struct HypernymResource {
    std::unordered_map<int32_t, std::vector<int32_t>> hypernyms_of;  // values sorted ascending
    size_t pair_count = 0;
    size_t dropped_oov = 0;      // load-time: pairs with an out-of-vocabulary member
    size_t dropped_self = 0;     // load-time: w -> w pairs
    size_t removed_eval = 0;     // filter-time: pairs overlapping an evaluation dataset

    bool contains(int32_t hypo, int32_t hyper) const;
    const std::vector<int32_t>* hypernyms(int32_t hypo) const;
    size_t hyponym_count() const { return hypernyms_of.size(); }
    size_t hypernym_count() const;
};

HypernymResource load_resource(const std::string& path, const Vocab& vocab);
HypernymResource transitive_closure(const HypernymResource& r, const Vocab& vocab);
HypernymResource filter_eval_pairs(const HypernymResource& r,
                                   const std::vector<RelationDataset>& datasets,
                                   const Vocab& vocab);

}  // namespace hypervec
