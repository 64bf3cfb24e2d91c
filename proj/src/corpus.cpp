#include "hypervec/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hypervec/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace hypervec {

namespace {

void split_tokens(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return in;
}

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& in, T& value, const std::string& path) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw DataError("truncated file: " + path);
}

}  // namespace

Vocab build_vocab(const std::string& corpus_path, long long min_count) {
    std::ifstream in = open_or_throw(corpus_path);

    std::unordered_map<std::string, long long> counts;
    long long total = 0;
    std::string line;
    std::vector<std::string> toks;
    while (std::getline(in, line)) {
        split_tokens(line, toks);
        for (auto& t : toks) {
            ++counts[t];
            ++total;
        }
    }

    std::vector<std::pair<std::string, long long>> kept;
    kept.reserve(counts.size());
    for (auto& [tok, c] : counts) {
        if (c >= min_count) kept.emplace_back(tok, c);
    }
    if (kept.empty()) {
        throw DataError("empty vocabulary: no token in " + corpus_path +
                        " reaches min_count=" + std::to_string(min_count));
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocab v;
    v.total_tokens = total;
    v.words.reserve(kept.size());
    v.counts.reserve(kept.size());
    for (int id = 0; id < static_cast<int>(kept.size()); ++id) {
        v.words.push_back(kept[id].first);
        v.counts.push_back(kept[id].second);
        v.index.emplace(kept[id].first, id);
    }
    return v;
}

void save_vocab(const Vocab& vocab, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "total_tokens\t" << vocab.total_tokens << "\n";
    for (int i = 0; i < vocab.size(); ++i) {
        out << vocab.words[i] << "\t" << vocab.counts[i] << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

Vocab load_vocab(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty vocabulary file: " + path);
    {
        std::istringstream head(line);
        std::string tag;
        long long total = -1;
        head >> tag >> total;
        if (tag != "total_tokens" || total < 0) {
            throw DataError("malformed vocabulary header in " + path);
        }
        Vocab v;
        v.total_tokens = total;
        long long lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos) {
                throw DataError("malformed vocabulary line " + std::to_string(lineno) +
                                " in " + path);
            }
            std::string tok = line.substr(0, tab);
            long long c = 0;
            try {
                c = std::stoll(line.substr(tab + 1));
            } catch (const std::exception&) {
                throw DataError("malformed count at line " + std::to_string(lineno) +
                                " in " + path);
            }
            int id = static_cast<int>(v.words.size());
            v.words.push_back(tok);
            v.counts.push_back(c);
            if (!v.index.emplace(std::move(tok), id).second) {
                throw DataError("duplicate token at line " + std::to_string(lineno) +
                                " in " + path);
            }
        }
        if (v.words.empty()) throw DataError("empty vocabulary file: " + path);
        return v;
    }
}

LineCorpus load_line_corpus(const std::string& corpus_path, const Vocab& vocab) {
    std::ifstream in = open_or_throw(corpus_path);
    LineCorpus corpus;
    std::string line;
    std::vector<std::string> toks;
    while (std::getline(in, line)) {
        split_tokens(line, toks);
        std::vector<int> ids;
        ids.reserve(toks.size());
        for (auto& t : toks) {
            int id = vocab.id_of(t);
            if (id >= 0) ids.push_back(id);
        }
        corpus.token_count += static_cast<long long>(ids.size());
        corpus.lines.push_back(std::move(ids));
    }
    return corpus;
}

double subsample_keep_probability(long long count, long long total_tokens,
                                  double subsample_t) {
    if (subsample_t <= 0.0) return 1.0;
    double f = static_cast<double>(count) / static_cast<double>(total_tokens);
    return std::sqrt(subsample_t / f) + subsample_t / f;
}

void subsample_line(const std::vector<int>& ids, const Vocab& vocab,
                    double subsample_t, Rng& rng, std::vector<int>& out) {
    out.clear();
    if (subsample_t <= 0.0) {
        out = ids;
        return;
    }
    for (int id : ids) {
        double keep = subsample_keep_probability(vocab.counts[id], vocab.total_tokens,
                                                 subsample_t);
        double u = rng.next_double();
        if (u < keep) out.push_back(id);
    }
}

long long window_pair_count(long long line_length, int window) {
    long long pairs = 0;
    for (long long i = 0; i < line_length; ++i) {
        pairs += std::min<long long>(i, window);
        pairs += std::min<long long>(line_length - 1 - i, window);
    }
    return pairs;
}

struct PairStream::Impl {
    std::ifstream in;
    std::string path;
    const Vocab* vocab;
    int window;
    double subsample_t;
    Rng rng;
    std::vector<WordContextPair> buffer;
    std::size_t pos = 0;
    std::vector<std::string> toks;
    std::vector<int> raw_ids, kept_ids;

    Impl(const std::string& p, const Vocab& v, int w, double t, std::uint64_t seed)
        : in(p), path(p), vocab(&v), window(w), subsample_t(t), rng(seed) {
        if (!in) throw DataError("cannot open file: " + p);
    }

    bool refill() {
        std::string line;
        while (std::getline(in, line)) {
            split_tokens(line, toks);
            raw_ids.clear();
            for (auto& t : toks) {
                int id = vocab->id_of(t);
                if (id >= 0) raw_ids.push_back(id);
            }
            subsample_line(raw_ids, *vocab, subsample_t, rng, kept_ids);
            buffer.clear();
            emit_window_pairs(kept_ids, window,
                              [this](WordContextPair p) { buffer.push_back(p); });
            pos = 0;
            if (!buffer.empty()) return true;
        }
        return false;
    }
};

PairStream::PairStream(const std::string& corpus_path, const Vocab& vocab, int window,
                       double subsample_t, std::uint64_t seed)
    : impl_(new Impl(corpus_path, vocab, window, subsample_t, seed)) {}

PairStream::~PairStream() { delete impl_; }

PairStream::PairStream(PairStream&& other) noexcept : impl_(other.impl_) {
    other.impl_ = nullptr;
}

PairStream& PairStream::operator=(PairStream&& other) noexcept {
    if (this != &other) {
        delete impl_;
        impl_ = other.impl_;
        other.impl_ = nullptr;
    }
    return *this;
}

bool PairStream::next(WordContextPair& out) {
    if (impl_->pos >= impl_->buffer.size() && !impl_->refill()) return false;
    out = impl_->buffer[impl_->pos++];
    return true;
}

namespace {

std::unordered_set<std::uint64_t> cooc_keys(const std::vector<std::vector<int>>& lines,
                                            int window, int min_pair_count,
                                            std::size_t max_distinct_pairs) {
    std::unordered_map<std::uint64_t, int> counts;
    for (const auto& ids : lines) {
        emit_window_pairs(ids, window, [&](WordContextPair p) {
            // Membership is keyed (context, word): word seen near context.
            std::uint64_t k =
                (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.context)) << 32) |
                static_cast<std::uint32_t>(p.word);
            ++counts[k];
            if (counts.size() > max_distinct_pairs) {
                throw DataError("co-occurrence index exceeds the memory budget of " +
                                std::to_string(max_distinct_pairs) +
                                " distinct pairs");
            }
        });
    }
    std::unordered_set<std::uint64_t> kept;
    kept.reserve(counts.size());
    for (auto& [k, c] : counts) {
        if (c >= min_pair_count) kept.insert(k);
    }
    return kept;
}

}  // namespace

CoocIndex build_cooc_index(const std::string& corpus_path, const Vocab& vocab,
                           int window, int min_pair_count,
                           std::size_t max_distinct_pairs) {
    LineCorpus corpus = load_line_corpus(corpus_path, vocab);
    return build_cooc_index(corpus, window, min_pair_count, max_distinct_pairs);
}

CoocIndex build_cooc_index(const LineCorpus& corpus, int window, int min_pair_count,
                           std::size_t max_distinct_pairs) {
    CoocIndex index;
    index.min_pair_count_ = min_pair_count;
    index.pairs_ = cooc_keys(corpus.lines, window, min_pair_count, max_distinct_pairs);
    return index;
}

namespace {
constexpr char kCoocMagic[4] = {'H', 'V', 'C', 'I'};
constexpr std::uint8_t kCoocVersion = 1;
}  // namespace

void CoocIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(kCoocMagic, 4);
    write_raw(out, kCoocVersion);
    write_raw(out, static_cast<std::uint32_t>(min_pair_count_));
    write_raw(out, static_cast<std::uint64_t>(pairs_.size()));
    std::vector<std::uint64_t> sorted(pairs_.begin(), pairs_.end());
    std::sort(sorted.begin(), sorted.end());
    out.write(reinterpret_cast<const char*>(sorted.data()),
              static_cast<std::streamsize>(sorted.size() * sizeof(std::uint64_t)));
    if (!out) throw DataError("write failed: " + path);
}

CoocIndex CoocIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCoocMagic, 4) != 0) {
        throw DataError("not a co-occurrence index file: " + path);
    }
    std::uint8_t version = 0;
    read_raw(in, version, path);
    if (version != kCoocVersion) {
        throw DataError("unsupported co-occurrence index version in " + path);
    }
    std::uint32_t min_pair = 0;
    std::uint64_t n = 0;
    read_raw(in, min_pair, path);
    read_raw(in, n, path);
    CoocIndex index;
    index.min_pair_count_ = static_cast<int>(min_pair);
    index.pairs_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t k = 0;
        read_raw(in, k, path);
        index.pairs_.insert(k);
    }
    return index;
}

NegTable build_neg_table(const Vocab& vocab, double alpha) {
    if (alpha < 0.0) throw UsageError("negative-sampling exponent must be >= 0");
    if (vocab.size() == 0) throw DataError("cannot build negative table: empty vocabulary");
    NegTable table;
    table.alpha = alpha;
    table.cdf.resize(vocab.size());
    double total = 0.0;
    for (int i = 0; i < vocab.size(); ++i) {
        total += std::pow(static_cast<double>(vocab.counts[i]), alpha);
        table.cdf[i] = total;
    }
    for (double& v : table.cdf) v /= total;
    table.cdf.back() = 1.0;
    return table;
}

int NegTable::sample(Rng& rng) const {
    double u = rng.next_double();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<int>(it - cdf.begin());
}

}  // namespace hypervec
