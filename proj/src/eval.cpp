#include "hypervec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hypervec/error.hpp"
#include "hypervec/measures.hpp"
#include "hypervec/rng.hpp"

namespace hypervec {

double average_precision(const std::vector<std::pair<double, bool>>& scored) {
    std::vector<size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return scored[a].first > scored[b].first;
    });

    size_t targets_seen = 0;
    double sum = 0.0;
    for (size_t rank = 0; rank < order.size(); ++rank) {
        if (scored[order[rank]].second) {
            ++targets_seen;
            sum += double(targets_seen) / double(rank + 1);
        }
    }
    if (targets_seen == 0)
        throw DataError("no target pairs to rank");
    return sum / double(targets_seen);
}

RankingResult eval_ranking(const EmbeddingStore& store, const RelationDataset& dataset,
                           const std::string& target_relation,
                           const std::unordered_set<std::string>& against) {
    std::vector<std::pair<double, bool>> scored;
    size_t skipped = 0;
    for (const RelPair& p : dataset.pairs) {
        bool is_target = p.relation == target_relation;
        if (!is_target && !against.empty() && !against.count(p.relation))
            continue;
        if (store.id_of(p.u) < 0 || store.id_of(p.v) < 0) {
            ++skipped;
            continue;
        }
        scored.emplace_back(hyper_score(store, p.u, p.v), is_target);
    }
    if (scored.empty())
        throw DataError("no in-vocabulary pairs to rank in dataset: " + dataset.name);
    return {average_precision(scored), scored.size(), skipped};
}

DirectionResult eval_directionality(
    const EmbeddingStore& store, const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty())
        throw DataError("no pairs for directionality evaluation");
    size_t correct = 0, oov = 0;
    for (const auto& [hypo, hyper] : pairs) {
        if (store.id_of(hypo) < 0 || store.id_of(hyper) < 0) {
            ++oov;
            continue;
        }
        if (direction(store, hypo, hyper) == Direction::u_is_hyponym)
            ++correct;
    }
    return {double(correct) / double(pairs.size()), correct, pairs.size(), oov};
}

namespace {

struct ClsPair {
    double score;
    int gold;  // 0 = other, 1 = hyper, 2 = rhyper
    int as_hyper;  // label if classified above threshold: 1, 2, or -1 (undecided direction)
};

int accuracy_count(const std::vector<ClsPair>& pairs, const std::vector<size_t>& idx, size_t begin,
                   size_t end, double threshold) {
    int correct = 0;
    for (size_t i = begin; i < end; ++i) {
        const ClsPair& p = pairs[idx[i]];
        int predicted = p.score >= threshold ? p.as_hyper : 0;
        if (predicted == p.gold)
            ++correct;
    }
    return correct;
}

}  // namespace

ThresholdResult eval_threshold_classification(const EmbeddingStore& store,
                                              const RelationDataset& dataset, int classes,
                                              int iterations, double sample_frac, uint64_t seed) {
    if (classes != 2 && classes != 3)
        throw UsageError("classes must be 2 or 3");
    if (iterations < 1)
        throw UsageError("iterations must be >= 1");
    if (!(sample_frac > 0.0) || sample_frac > 1.0)
        throw UsageError("sample fraction must be in (0, 1]");

    std::vector<ClsPair> pairs;
    size_t skipped = 0;
    for (const RelPair& p : dataset.pairs) {
        int gold;
        if (p.relation == kLabelHyper)
            gold = 1;
        else if (p.relation == kLabelOther)
            gold = 0;
        else if (classes == 3 && p.relation == kLabelRevHyper)
            gold = 2;
        else
            throw DataError("unexpected relation label for " + std::to_string(classes) +
                            "-class threshold evaluation: " + p.relation);
        if (store.id_of(p.u) < 0 || store.id_of(p.v) < 0) {
            ++skipped;
            continue;
        }
        ClsPair cp;
        cp.score = hyper_score(store, p.u, p.v);
        cp.gold = gold;
        if (classes == 2) {
            cp.as_hyper = 1;
        } else {
            switch (direction(store, p.u, p.v)) {
                case Direction::u_is_hyponym:
                    cp.as_hyper = 1;
                    break;
                case Direction::v_is_hyponym:
                    cp.as_hyper = 2;
                    break;
                default:
                    cp.as_hyper = -1;
            }
        }
        pairs.push_back(cp);
    }

    size_t n = pairs.size();
    if (n < 2)
        throw DataError("fewer than 2 in-vocabulary pairs in dataset: " + dataset.name);
    size_t m = size_t(std::ceil(sample_frac * double(n)));
    if (m == 0)
        m = 1;

    std::vector<size_t> idx(n);
    std::vector<double> sample_scores;
    std::vector<double> grid;
    std::vector<double> accs;
    accs.reserve(size_t(iterations));

    for (int iter = 0; iter < iterations; ++iter) {
        Rng rng(derive_seed(seed, kThresholdIterSalt, uint64_t(iter)));

        // Sample m pairs without replacement until both sides of the threshold
        // can be learned (sample not single-class in gold).
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            std::iota(idx.begin(), idx.end(), 0);
            for (size_t i = 0; i < m; ++i) {
                size_t j = i + size_t(rng.below(uint64_t(n - i)));
                std::swap(idx[i], idx[j]);
            }
            int first = pairs[idx[0]].gold;
            for (size_t i = 1; i < m; ++i)
                if (pairs[idx[i]].gold != first) {
                    ok = true;
                    break;
                }
        }
        if (!ok)
            throw DataError("could not sample more than one class in 100 attempts "
                            "(sample size " +
                            std::to_string(m) + ")");

        sample_scores.clear();
        for (size_t i = 0; i < m; ++i)
            sample_scores.push_back(pairs[idx[i]].score);
        std::sort(sample_scores.begin(), sample_scores.end());

        grid.clear();
        grid.push_back(-std::numeric_limits<double>::infinity());
        for (size_t i = 0; i + 1 < sample_scores.size(); ++i)
            grid.push_back(0.5 * (sample_scores[i] + sample_scores[i + 1]));
        grid.push_back(std::numeric_limits<double>::infinity());

        double best_threshold = grid[0];
        int best_correct = -1;
        for (double t : grid) {
            int correct = accuracy_count(pairs, idx, 0, m, t);
            if (correct > best_correct) {
                best_correct = correct;
                best_threshold = t;
            }
        }

        // Held-out 1-frac of the pairs; with sample_frac = 1 there is no
        // held-out part and the sample itself is scored.
        size_t eval_begin = m < n ? m : 0;
        size_t eval_end = m < n ? n : m;
        int correct = accuracy_count(pairs, idx, eval_begin, eval_end, best_threshold);
        accs.push_back(double(correct) / double(eval_end - eval_begin));
    }

    double mean = 0.0;
    for (double a : accs)
        mean += a;
    mean /= double(accs.size());
    double var = 0.0;
    for (double a : accs)
        var += (a - mean) * (a - mean);
    var /= double(accs.size());
    return {mean, std::sqrt(var), iterations, n, skipped};
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& xs) {
    size_t n = xs.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]])
            ++j;
        double rank = 0.5 * double(i + j) + 1.0;  // mean of 1-based ranks i+1..j+1
        for (size_t k = i; k <= j; ++k)
            ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw UsageError("spearman inputs differ in length");
    if (xs.size() < 3)
        throw UsageError("spearman needs at least 3 points");
    std::vector<double> rx = average_ranks(xs);
    std::vector<double> ry = average_ranks(ys);

    size_t n = rx.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mx, dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw NumericError("spearman undefined: a rank vector is constant");
    return sxy / std::sqrt(sxx * syy);
}

GradedResult eval_graded(const EmbeddingStore& store, const RelationDataset& dataset) {
    std::vector<double> model, gold;
    size_t skipped = 0;
    for (const RelPair& p : dataset.pairs) {
        if (!p.graded)
            throw DataError("pair without graded score: " + p.u + " " + p.v);
        if (store.id_of(p.u) < 0 || store.id_of(p.v) < 0) {
            ++skipped;
            continue;
        }
        model.push_back(hyper_score(store, p.u, p.v));
        gold.push_back(*p.graded);
    }
    if (model.size() < 3)
        throw DataError("fewer than 3 in-vocabulary graded pairs in dataset: " + dataset.name);
    return {spearman(model, gold), model.size(), skipped};
}

}  // namespace hypervec
