#include "hypervec/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "hypervec/error.hpp"

namespace hypervec {

namespace {

double sigmoid(double x) {
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// softplus(x) = log(1 + e^x), stable for large |x|; -log sigmoid(s) = softplus(-s)
double softplus(double x) {
    if (x > 0.0)
        return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double safe_cos(std::span<const double> x, std::span<const double> y) {
    double nx = norm(x), ny = norm(y);
    if (nx == 0.0 || ny == 0.0)
        return 0.0;
    return dot(x, y) / (nx * ny);
}

// Gradient buffers for one composite step, applied to word vectors in a single
// sweep so every term is evaluated at the pre-step state. Buffers live in
// per-row vectors whose heap storage stays put as the row list grows, so
// pointers handed out by at() remain valid for the whole step.
class GradAccum {
  public:
    explicit GradAccum(size_t dim) : dim_(dim) {}

    double* at(int32_t row) {
        for (size_t i = 0; i < ids_.size(); ++i)
            if (ids_[i] == row)
                return data_[i].data();
        ids_.push_back(row);
        data_.emplace_back(dim_, 0.0);
        return data_.back().data();
    }

    void apply(EmbeddingStore& store, double eta) {
        for (size_t i = 0; i < ids_.size(); ++i) {
            auto row = store.word_row(ids_[i]);
            const double* g = data_[i].data();
            for (size_t j = 0; j < dim_; ++j)
                row[j] -= eta * g[j];
        }
    }

  private:
    size_t dim_;
    std::vector<int32_t> ids_;
    std::vector<std::vector<double>> data_;
};

// d cos(x,y) / dx = y/(|x||y|) - cos(x,y) x/|x|^2, accumulated with weight.
void add_cos_grad(std::span<const double> x, std::span<const double> y, double weight, double* gx,
                  double* gy) {
    double nx = norm(x), ny = norm(y);
    if (nx == 0.0 || ny == 0.0)
        return;
    double inv = 1.0 / (nx * ny);
    double c = dot(x, y) * inv;
    for (size_t j = 0; j < x.size(); ++j) {
        gx[j] += weight * (y[j] * inv - c * x[j] / (nx * nx));
        gy[j] += weight * (x[j] * inv - c * y[j] / (ny * ny));
    }
}

// One term of the distance form: attract x toward y, repel x from k sampled
// negatives. Loss contribution: scale * ((1 - cos(x,y)) + sum_n cos(x,n)).
double add_pair_terms(const EmbeddingStore& store, GradAccum& acc, int32_t x, int32_t y,
                      double scale, const NegTable& table, int k, Rng& rng) {
    auto xv = store.word_row(x);
    auto yv = store.word_row(y);
    double loss = scale * (1.0 - safe_cos(xv, yv));
    add_cos_grad(xv, yv, -scale, acc.at(x), acc.at(y));
    for (int i = 0; i < k; ++i) {
        int32_t n = int32_t(table.sample(rng));
        if (n == x || n == y)
            continue;
        auto nv = store.word_row(n);
        loss += scale * safe_cos(xv, nv);
        add_cos_grad(xv, nv, scale, acc.at(x), acc.at(n));
    }
    return loss;
}

}  // namespace

double sgns_step(EmbeddingStore& store, int32_t w, int32_t c, std::span<const int32_t> negatives,
                 double eta) {
    auto wv = store.word_row(w);
    size_t dim = wv.size();
    thread_local std::vector<double> wgrad;
    wgrad.assign(dim, 0.0);

    auto cv = store.ctx_row(c);
    double s = dot(wv, cv);
    double g = sigmoid(s) - 1.0;
    double loss = softplus(-s);
    for (size_t j = 0; j < dim; ++j) {
        wgrad[j] += g * cv[j];
        cv[j] -= eta * g * wv[j];
    }

    for (int32_t n : negatives) {
        auto nv = store.ctx_row(n);
        s = dot(wv, nv);
        g = sigmoid(s);
        loss += softplus(s);
        for (size_t j = 0; j < dim; ++j) {
            wgrad[j] += g * nv[j];
            nv[j] -= eta * g * wv[j];
        }
    }

    for (size_t j = 0; j < dim; ++j)
        wv[j] -= eta * wgrad[j];
    return loss;
}

PartitionResult partition_hypernyms(const EmbeddingStore& store, int32_t w, int32_t c,
                                    const std::vector<int32_t>& hypers, const CoocIndex& cooc,
                                    double theta) {
    PartitionResult out;
    if (hypers.empty())
        return out;
    double cwc = safe_cos(store.word_row(w), store.ctx_row(c));
    for (int32_t u : hypers) {
        if (!cooc.contains(c, u))
            continue;
        double cuc = safe_cos(store.word_row(u), store.ctx_row(c));
        if (cwc - cuc >= theta)
            out.h_plus.push_back(u);
        else
            out.h_minus.push_back(u);
    }
    return out;
}

double hyper_attract_step(EmbeddingStore& store, int32_t w, std::span<const int32_t> u_set,
                          const NegTable& table, int k, Rng& rng, double eta) {
    if (u_set.empty())
        return 0.0;
    GradAccum acc(store.dim);
    double scale = 1.0 / double(u_set.size());
    double loss = 0.0;
    for (int32_t u : u_set)
        loss += add_pair_terms(store, acc, w, u, scale, table, k, rng);
    acc.apply(store, eta);
    return loss;
}

double hyper_generality_step(EmbeddingStore& store, int32_t w, std::span<const int32_t> v_set,
                             const NegTable& table, int k, Rng& rng, double eta) {
    if (v_set.empty())
        return 0.0;
    GradAccum acc(store.dim);
    double loss = 0.0;
    for (int32_t v : v_set)
        loss += add_pair_terms(store, acc, v, w, 1.0, table, k, rng);
    acc.apply(store, eta);
    return loss;
}

namespace {

struct WorkerLoss {
    double sgns = 0.0;
    double attract = 0.0;
    double generality = 0.0;
    uint64_t pairs = 0;
};

void validate_config(const TrainConfig& cfg) {
    if (cfg.dim < 1)
        throw UsageError("dim must be >= 1");
    if (cfg.window < 1)
        throw UsageError("window must be >= 1");
    if (cfg.negatives < 1)
        throw UsageError("negatives must be >= 1");
    if (!(cfg.eta0 > 0.0))
        throw UsageError("learning rate must be > 0");
    if (cfg.theta < 0.0)
        throw UsageError("margin must be >= 0");
    if (cfg.epochs < 1)
        throw UsageError("epochs must be >= 1");
    if (cfg.subsample_t < 0.0)
        throw UsageError("subsample threshold must be >= 0");
    if (cfg.workers < 1)
        throw UsageError("workers must be >= 1");
}

// Pairs each (epoch, worker) slice will emit, replaying the same subsampling
// stream the training pass consumes; fixes the learning-rate schedule total.
uint64_t count_total_pairs(const LineCorpus& corpus, const Vocab& vocab, const TrainConfig& cfg) {
    size_t n_lines = corpus.lines.size();
    uint64_t total = 0;
    std::vector<int32_t> kept;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int worker = 0; worker < cfg.workers; ++worker) {
            size_t begin = n_lines * size_t(worker) / size_t(cfg.workers);
            size_t end = n_lines * size_t(worker + 1) / size_t(cfg.workers);
            Rng rng(derive_seed(cfg.seed, kPairStreamSalt, uint64_t(epoch), uint64_t(worker)));
            for (size_t li = begin; li < end; ++li) {
                subsample_line(corpus.lines[li], vocab, cfg.subsample_t, rng, kept);
                total += window_pair_count(kept.size(), cfg.window);
            }
        }
    }
    return total;
}

}  // namespace

EmbeddingStore train(const LineCorpus& corpus, const Vocab& vocab,
                     const HypernymResource& resource, const CoocIndex& cooc,
                     const TrainConfig& cfg, std::vector<EpochLoss>* losses) {
    validate_config(cfg);
    bool use_hier = !cfg.sgns_only && resource.pair_count > 0;
    if (!cfg.sgns_only && resource.pair_count == 0)
        std::fprintf(stderr, "warning: hypernym resource is empty; training is plain SGNS\n");

    uint64_t total_pairs = count_total_pairs(corpus, vocab, cfg);
    if (total_pairs == 0)
        throw DataError("corpus yields no training pairs");

    EmbeddingStore store = init_store(vocab, cfg.dim, cfg.seed);
    NegTable neg_table = build_neg_table(vocab, cfg.alpha);

    std::atomic<uint64_t> processed{0};
    size_t n_lines = corpus.lines.size();

    auto run_worker = [&](int epoch, int worker, WorkerLoss* out) {
        size_t begin = n_lines * size_t(worker) / size_t(cfg.workers);
        size_t end = n_lines * size_t(worker + 1) / size_t(cfg.workers);
        Rng pair_rng(derive_seed(cfg.seed, kPairStreamSalt, uint64_t(epoch), uint64_t(worker)));
        Rng neg_rng(derive_seed(cfg.seed, kNegStreamSalt, uint64_t(epoch), uint64_t(worker)));
        std::vector<int32_t> kept;
        std::vector<int32_t> negs;
        negs.reserve(size_t(cfg.negatives));
        for (size_t li = begin; li < end; ++li) {
            subsample_line(corpus.lines[li], vocab, cfg.subsample_t, pair_rng, kept);
            emit_window_pairs(kept, cfg.window, [&](const WordContextPair& p) {
                uint64_t done = processed.fetch_add(1, std::memory_order_relaxed);
                double eta =
                    cfg.eta0 * std::max(1e-4, 1.0 - double(done) / double(total_pairs));
                negs.clear();
                for (int i = 0; i < cfg.negatives; ++i) {
                    int32_t n = int32_t(neg_table.sample(neg_rng));
                    if (n != p.context)
                        negs.push_back(n);
                }
                out->sgns += sgns_step(store, p.word, p.context, negs, eta);
                if (use_hier) {
                    const std::vector<int32_t>* hypers = resource.hypernyms(p.word);
                    if (hypers) {
                        PartitionResult part = partition_hypernyms(store, p.word, p.context,
                                                                   *hypers, cooc, cfg.theta);
                        if (!part.h_plus.empty())
                            out->attract += hyper_attract_step(store, p.word, part.h_plus,
                                                               neg_table, cfg.negatives, neg_rng,
                                                               eta);
                        if (!part.h_minus.empty())
                            out->generality += hyper_generality_step(store, p.word, part.h_minus,
                                                                     neg_table, cfg.negatives,
                                                                     neg_rng, eta);
                    }
                }
                ++out->pairs;
            });
        }
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<WorkerLoss> wl(size_t(cfg.workers));
        if (cfg.workers == 1) {
            run_worker(epoch, 0, &wl[0]);
        } else {
            std::vector<std::thread> threads;
            for (int worker = 0; worker < cfg.workers; ++worker)
                threads.emplace_back(run_worker, epoch, worker, &wl[size_t(worker)]);
            for (auto& t : threads)
                t.join();
        }
        if (losses) {
            EpochLoss row{epoch + 1, 0.0, 0.0, 0.0, 0};
            for (const WorkerLoss& l : wl) {
                row.sgns += l.sgns;
                row.attract += l.attract;
                row.generality += l.generality;
                row.pairs += l.pairs;
            }
            if (row.pairs > 0) {
                row.sgns /= double(row.pairs);
                row.attract /= double(row.pairs);
                row.generality /= double(row.pairs);
            }
            losses->push_back(row);
        }
    }

    for (size_t i = 0; i < size_t(store.size()); ++i) {
        for (double x : store.word_row(int32_t(i)))
            if (!std::isfinite(x))
                throw NumericError("training produced a non-finite word vector for token: " +
                                   store.tokens[i]);
        for (double x : store.ctx_row(int32_t(i)))
            if (!std::isfinite(x))
                throw NumericError("training produced a non-finite context vector for token: " +
                                   store.tokens[i]);
    }
    return store;
}

}  // namespace hypervec
