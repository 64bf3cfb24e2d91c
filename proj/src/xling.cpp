#include "hypervec/xling.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unordered_map>

#include "hypervec/error.hpp"

namespace hypervec {

BilingualLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open lexicon file: " + path);

    BilingualLexicon lex;
    std::unordered_map<std::string, size_t> slot;  // source -> index in entries
    std::vector<uint64_t> kept_count;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        size_t t1 = line.find('\t');
        if (t1 == std::string::npos)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected 2 or 3 tab-separated columns");
        size_t t2 = line.find('\t', t1 + 1);
        std::string source = line.substr(0, t1);
        std::string target;
        uint64_t count = 1;
        if (t2 == std::string::npos) {
            target = line.substr(t1 + 1);
        } else {
            if (line.find('\t', t2 + 1) != std::string::npos)
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": expected 2 or 3 tab-separated columns");
            target = line.substr(t1 + 1, t2 - t1 - 1);
            std::string count_str = line.substr(t2 + 1);
            const char* s = count_str.c_str();
            char* end = nullptr;
            count = std::strtoull(s, &end, 10);
            if (end == s || *end != '\0')
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": bad alignment count: " + count_str);
        }
        if (source.empty() || target.empty())
            throw DataError(path + ":" + std::to_string(lineno) + ": empty column");

        auto it = slot.find(source);
        if (it == slot.end()) {
            slot.emplace(source, lex.entries.size());
            lex.entries.emplace_back(source, target);
            kept_count.push_back(count);
        } else {
            ++lex.dropped_duplicates;
            if (count > kept_count[it->second]) {
                lex.entries[it->second].second = target;
                kept_count[it->second] = count;
            }
        }
    }
    if (lex.entries.empty())
        throw DataError("lexicon has no entries: " + path);
    return lex;
}

MappingModel fit_mapping(const EmbeddingStore& source, const EmbeddingStore& target,
                         const BilingualLexicon& lexicon, double lambda, FitStats* stats) {
    if (lambda < 0.0)
        throw UsageError("lambda must be >= 0");

    // Rows in (source, target) token order so the fit does not depend on
    // lexicon file order.
    std::vector<std::pair<int32_t, int32_t>> rows;
    size_t skipped = 0;
    std::vector<std::pair<std::string, std::string>> sorted = lexicon.entries;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [s, t] : sorted) {
        int32_t si = source.id_of(s);
        int32_t ti = target.id_of(t);
        if (si < 0 || ti < 0) {
            ++skipped;
            continue;
        }
        rows.emplace_back(si, ti);
    }
    if (rows.empty())
        throw DataError("no lexicon entries found in both vocabularies");
    if (stats) {
        stats->rows_used = rows.size();
        stats->skipped_oov = skipped;
    }

    size_t d1 = source.dim, d2 = target.dim, n = rows.size();
    if (n < d1) {
        std::fprintf(stderr,
                     "warning: mapping is underdetermined (%zu usable pairs for %zu dims)\n", n,
                     d1);
        if (lambda == 0.0)
            throw NumericError("normal equations are singular; use lambda > 0");
    }

    Eigen::MatrixXd x(n, d1), y(n, d2);
    for (size_t i = 0; i < n; ++i) {
        auto sv = source.word_row(rows[i].first);
        auto tv = target.word_row(rows[i].second);
        for (size_t j = 0; j < d1; ++j)
            x(i, j) = sv[j];
        for (size_t j = 0; j < d2; ++j)
            y(i, j) = tv[j];
    }

    Eigen::MatrixXd a = x.transpose() * x;
    a.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        if (lambda == 0.0)
            throw NumericError("normal equations are singular; use lambda > 0");
        throw NumericError("normal equations factorization failed");
    }
    Eigen::MatrixXd w = llt.solve(x.transpose() * y);

    MappingModel model;
    model.source_dim = uint32_t(d1);
    model.target_dim = uint32_t(d2);
    model.lambda = lambda;
    model.w.resize(d1 * d2);
    for (size_t i = 0; i < d1; ++i)
        for (size_t j = 0; j < d2; ++j)
            model.w[i * d2 + j] = w(i, j);
    return model;
}

EmbeddingStore project(const MappingModel& model, const EmbeddingStore& source) {
    if (int(model.source_dim) != source.dim)
        throw UsageError("mapping expects source dim " + std::to_string(model.source_dim) +
                         ", store has dim " + std::to_string(source.dim));

    EmbeddingStore out;
    out.tokens = source.tokens;
    out.index = source.index;
    out.dim = int(model.target_dim);
    out.word.resize(size_t(source.size()) * size_t(out.dim), 0.0);

    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> x(source.word.data(), source.size(), model.source_dim);
    Eigen::Map<const RowMat> w(model.w.data(), model.source_dim, model.target_dim);
    Eigen::Map<RowMat> y(out.word.data(), source.size(), model.target_dim);
    y = x * w;
    return out;
}

namespace {

void write_raw(std::ofstream& out, const void* p, size_t n, const std::string& path) {
    out.write(reinterpret_cast<const char*>(p), std::streamsize(n));
    if (!out)
        throw DataError("write failed: " + path);
}

void read_raw(std::ifstream& in, void* p, size_t n, const std::string& path) {
    in.read(reinterpret_cast<char*>(p), std::streamsize(n));
    if (in.gcount() != std::streamsize(n))
        throw DataError("truncated mapping file: " + path);
}

}  // namespace

void save_mapping(const MappingModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open file for writing: " + path);
    write_raw(out, "HVMM", 4, path);
    uint32_t version = 1;
    write_raw(out, &version, sizeof version, path);
    write_raw(out, &model.source_dim, sizeof model.source_dim, path);
    write_raw(out, &model.target_dim, sizeof model.target_dim, path);
    write_raw(out, &model.lambda, sizeof model.lambda, path);
    write_raw(out, model.w.data(), model.w.size() * sizeof(double), path);
}

MappingModel load_mapping(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open mapping file: " + path);
    char magic[4];
    read_raw(in, magic, 4, path);
    if (std::string(magic, 4) != "HVMM")
        throw DataError("not a mapping file (bad magic): " + path);
    uint32_t version = 0;
    read_raw(in, &version, sizeof version, path);
    if (version != 1)
        throw DataError("unsupported mapping file version " + std::to_string(version) + ": " +
                        path);
    MappingModel model;
    read_raw(in, &model.source_dim, sizeof model.source_dim, path);
    read_raw(in, &model.target_dim, sizeof model.target_dim, path);
    read_raw(in, &model.lambda, sizeof model.lambda, path);
    if (model.source_dim == 0 || model.target_dim == 0)
        throw DataError("mapping file has zero dimension: " + path);
    model.w.resize(size_t(model.source_dim) * model.target_dim);
    read_raw(in, model.w.data(), model.w.size() * sizeof(double), path);
    char extra;
    if (in.read(&extra, 1).gcount() != 0)
        throw DataError("trailing bytes in mapping file: " + path);
    return model;
}

RankingResult eval_projected(const EmbeddingStore& projected, const RelationDataset& dataset,
                             const std::string& target_relation,
                             const std::unordered_set<std::string>& against) {
    return eval_ranking(projected, dataset, target_relation, against);
}

}  // namespace hypervec
