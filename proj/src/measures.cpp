#include "hypervec/measures.hpp"

#include "hypervec/error.hpp"

namespace hypervec {

const char* to_string(Direction d) {
    switch (d) {
        case Direction::u_is_hyponym:
            return "u_is_hyponym";
        case Direction::v_is_hyponym:
            return "v_is_hyponym";
        default:
            return "undecided";
    }
}

double hyper_score(const EmbeddingStore& store, const std::string& u, const std::string& v) {
    auto uv = store.word_row(store.require(u));
    auto vv = store.word_row(store.require(v));
    double nu = norm(uv), nv = norm(vv);
    if (nu == 0.0)
        throw NumericError("zero-norm vector for token: " + u);
    if (nv == 0.0)
        throw NumericError("zero-norm vector for token: " + v);
    return dot(uv, vv) / (nu * nv) * (nv / nu);
}

Direction direction(const EmbeddingStore& store, const std::string& u, const std::string& v) {
    double nu = norm(store.word_row(store.require(u)));
    double nv = norm(store.word_row(store.require(v)));
    if (nu > nv)
        return Direction::v_is_hyponym;
    if (nv > nu)
        return Direction::u_is_hyponym;
    return Direction::undecided;
}

std::vector<double> pair_features(const EmbeddingStore& store, const std::string& u,
                                  const std::string& v) {
    auto uv = store.word_row(store.require(u));
    auto vv = store.word_row(store.require(v));
    double nu = norm(uv), nv = norm(vv);
    if (nu == 0.0)
        throw NumericError("zero-norm vector for token: " + u);
    if (nv == 0.0)
        throw NumericError("zero-norm vector for token: " + v);
    std::vector<double> f;
    f.reserve(size_t(store.dim) + 3);
    for (size_t j = 0; j < size_t(store.dim); ++j)
        f.push_back(vv[j] - uv[j]);
    f.push_back(dot(uv, vv) / (nu * nv));
    f.push_back(nu);
    f.push_back(nv);
    return f;
}

}  // namespace hypervec
