#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hypervec/rng.hpp"

namespace hypervec {

// Word/context vocabulary. Ids are dense, assigned by descending count with
// lexicographic tie-break, so two builds over the same file agree exactly.
struct Vocab {
    std::vector<std::string> words;              // id -> token
    std::vector<long long> counts;               // id -> raw corpus count
    long long total_tokens = 0;                  // raw token count before pruning
    std::unordered_map<std::string, int> index;  // token -> id

    int size() const { return static_cast<int>(words.size()); }
    int id_of(const std::string& token) const {
        auto it = index.find(token);
        return it == index.end() ? -1 : it->second;
    }
};

Vocab build_vocab(const std::string& corpus_path, long long min_count);

void save_vocab(const Vocab& vocab, const std::string& path);
Vocab load_vocab(const std::string& path);

// Corpus lines mapped to vocabulary ids, out-of-vocabulary tokens removed.
// The trainer iterates this in memory; the streaming PairStream below
// produces the identical pair sequence directly from the file.
struct LineCorpus {
    std::vector<std::vector<int>> lines;
    long long token_count = 0;  // in-vocabulary tokens
};

LineCorpus load_line_corpus(const std::string& corpus_path, const Vocab& vocab);

// Survival probability of the frequency-based subsampling rule,
// sqrt(t/f) + t/f with f = count/total_tokens. Values above 1 always keep.
double subsample_keep_probability(long long count, long long total_tokens,
                                  double subsample_t);

// Applies subsampling to one line of ids. Consumes exactly one rng draw per
// id when subsample_t > 0 and none otherwise; survivors are appended to out.
void subsample_line(const std::vector<int>& ids, const Vocab& vocab,
                    double subsample_t, Rng& rng, std::vector<int>& out);

struct WordContextPair {
    int word = -1;     // center
    int context = -1;  // within `window` positions of the center
};

// Emits (center, context) pairs over a post-subsampling line: for each
// position i in order, contexts j in ascending order with 0 < |i-j| <= window.
template <typename Fn>
void emit_window_pairs(const std::vector<int>& ids, int window, Fn&& fn) {
    const int n = static_cast<int>(ids.size());
    for (int i = 0; i < n; ++i) {
        const int lo = i - window < 0 ? 0 : i - window;
        const int hi = i + window >= n ? n - 1 : i + window;
        for (int j = lo; j <= hi; ++j) {
            if (j == i) continue;
            fn(WordContextPair{ids[i], ids[j]});
        }
    }
}

// Number of pairs emit_window_pairs yields for a line of the given length.
long long window_pair_count(long long line_length, int window);

// Streaming (word, context) pair source over a corpus file. Subsampling
// decisions are reproducible from the seed.
class PairStream {
public:
    PairStream(const std::string& corpus_path, const Vocab& vocab, int window,
               double subsample_t, std::uint64_t seed);
    ~PairStream();
    PairStream(PairStream&&) noexcept;
    PairStream& operator=(PairStream&&) noexcept;

    // Returns false at end of corpus.
    bool next(WordContextPair& out);

private:
    struct Impl;
    Impl* impl_;
};

// Exact (context, word) co-occurrence membership over training windows,
// built without subsampling.
class CoocIndex {
public:
    CoocIndex() = default;

    // True iff `word` appeared within the window of `context` at least
    // min_pair_count times.
    bool contains(int context_id, int word_id) const {
        return pairs_.count(key(context_id, word_id)) != 0;
    }

    std::size_t size() const { return pairs_.size(); }
    int min_pair_count() const { return min_pair_count_; }

    void save(const std::string& path) const;
    static CoocIndex load(const std::string& path);

private:
    static std::uint64_t key(int context_id, int word_id) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(context_id)) << 32) |
               static_cast<std::uint32_t>(word_id);
    }

    std::unordered_set<std::uint64_t> pairs_;
    int min_pair_count_ = 1;

    friend CoocIndex build_cooc_index(const std::string&, const Vocab&, int, int,
                                      std::size_t);
    friend CoocIndex build_cooc_index(const LineCorpus&, int, int, std::size_t);
};

// max_distinct_pairs bounds the candidate map; exceeding it is a hard error
// rather than a silent approximation.
CoocIndex build_cooc_index(const std::string& corpus_path, const Vocab& vocab,
                           int window, int min_pair_count,
                           std::size_t max_distinct_pairs = std::size_t(1) << 27);
CoocIndex build_cooc_index(const LineCorpus& corpus, int window, int min_pair_count,
                           std::size_t max_distinct_pairs = std::size_t(1) << 27);

// Cumulative distribution for negative sampling, p(i) proportional to
// count(i)^alpha.
struct NegTable {
    std::vector<double> cdf;  // ascending, back() == 1.0
    double alpha = 0.75;

    int sample(Rng& rng) const;
};

NegTable build_neg_table(const Vocab& vocab, double alpha);

}  // namespace hypervec
