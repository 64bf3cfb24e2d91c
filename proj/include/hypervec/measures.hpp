#pragma once

#include <string>
#include <vector>

#include "hypervec/embeddings.hpp"

namespace hypervec {

enum class Direction { u_is_hyponym, v_is_hyponym, undecided };

const char* to_string(Direction d);

// HyperScore(u,v) = cos(u,v) * |v| / |u|
double hyper_score(const EmbeddingStore& store, const std::string& u, const std::string& v);

Direction direction(const EmbeddingStore& store, const std::string& u, const std::string& v);

// [v - u (d reals), cos(u,v), |u|, |v|]
std::vector<double> pair_features(const EmbeddingStore& store, const std::string& u,
                                  const std::string& v);

}  // namespace hypervec
