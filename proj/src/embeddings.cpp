#include "hypervec/embeddings.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hypervec/error.hpp"

namespace hypervec {

int EmbeddingStore::require(const std::string& token) const {
    int id = id_of(token);
    if (id < 0) throw OovError(token);
    return id;
}

EmbeddingStore init_store(const Vocab& vocab, int dim, std::uint64_t seed) {
    if (dim < 1) throw UsageError("embedding dimension must be >= 1");
    EmbeddingStore store;
    store.tokens = vocab.words;
    store.index = vocab.index;
    store.dim = dim;
    const std::size_t n = static_cast<std::size_t>(vocab.size()) * dim;
    store.word.resize(n);
    store.ctx.assign(n, 0.0);
    Rng rng(seed);
    const double inv_dim = 1.0 / dim;
    for (std::size_t i = 0; i < n; ++i) {
        store.word[i] = (rng.next_double() - 0.5) * inv_dim;
    }
    return store;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm(std::span<const double> x) {
    return std::sqrt(dot(x, x));
}

double cosine(std::span<const double> x, std::span<const double> y) {
    double nx = norm(x);
    double ny = norm(y);
    if (nx == 0.0 || ny == 0.0) {
        throw NumericError("cosine of a zero-norm vector is undefined");
    }
    return dot(x, y) / (nx * ny);
}

void save_store_text(const EmbeddingStore& store, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << store.size() << " " << store.dim << "\n";
    char buf[64];
    for (int i = 0; i < store.size(); ++i) {
        out << store.tokens[i];
        auto row = store.word_row(i);
        for (double v : row) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

EmbeddingStore load_store_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty embedding file: " + path);
    long long count = -1;
    int dim = -1;
    {
        std::istringstream head(line);
        head >> count >> dim;
        if (!head || count < 1 || dim < 1) {
            throw DataError("malformed embedding header in " + path);
        }
    }
    EmbeddingStore store;
    store.dim = dim;
    store.tokens.reserve(count);
    store.word.reserve(static_cast<std::size_t>(count) * dim);
    long long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        row >> token;
        if (token.empty()) {
            throw DataError("malformed embedding line " + std::to_string(lineno) +
                            " in " + path);
        }
        for (int j = 0; j < dim; ++j) {
            double v = 0.0;
            if (!(row >> v)) {
                throw DataError("embedding line " + std::to_string(lineno) + " in " +
                                path + " has fewer than " + std::to_string(dim) +
                                " values");
            }
            store.word.push_back(v);
        }
        double extra = 0.0;
        if (row >> extra) {
            throw DataError("embedding line " + std::to_string(lineno) + " in " +
                            path + " has more than " + std::to_string(dim) +
                            " values");
        }
        int id = static_cast<int>(store.tokens.size());
        store.tokens.push_back(token);
        if (!store.index.emplace(std::move(token), id).second) {
            throw DataError("duplicate token at line " + std::to_string(lineno) +
                            " in " + path);
        }
    }
    if (static_cast<long long>(store.tokens.size()) != count) {
        throw DataError("embedding header in " + path + " declares " +
                        std::to_string(count) + " rows but the body has " +
                        std::to_string(store.tokens.size()));
    }
    return store;
}

namespace {
constexpr char kEmbMagic[4] = {'H', 'V', 'E', 'C'};
constexpr std::uint8_t kEmbVersion = 1;
}  // namespace

void save_store_binary(const EmbeddingStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(kEmbMagic, 4);
    out.put(static_cast<char>(kEmbVersion));
    std::uint32_t dim = static_cast<std::uint32_t>(store.dim);
    std::uint64_t count = static_cast<std::uint64_t>(store.size());
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const auto& tok : store.tokens) {
        std::uint16_t len = static_cast<std::uint16_t>(tok.size());
        out.write(reinterpret_cast<const char*>(&len), sizeof(len));
        out.write(tok.data(), len);
    }
    out.write(reinterpret_cast<const char*>(store.word.data()),
              static_cast<std::streamsize>(store.word.size() * sizeof(double)));
    if (!out) throw DataError("write failed: " + path);
}

EmbeddingStore load_store_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kEmbMagic, 4) != 0) {
        throw DataError("not a binary embedding file: " + path);
    }
    int version = in.get();
    if (version != kEmbVersion) {
        throw DataError("unsupported embedding file version in " + path);
    }
    std::uint32_t dim = 0;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in || dim < 1 || count < 1) {
        throw DataError("malformed embedding header in " + path);
    }
    EmbeddingStore store;
    store.dim = static_cast<int>(dim);
    store.tokens.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint16_t len = 0;
        in.read(reinterpret_cast<char*>(&len), sizeof(len));
        if (!in) throw DataError("truncated token block in " + path);
        std::string tok(len, '\0');
        in.read(tok.data(), len);
        if (!in) throw DataError("truncated token block in " + path);
        int id = static_cast<int>(i);
        store.tokens.push_back(tok);
        if (!store.index.emplace(std::move(tok), id).second) {
            throw DataError("duplicate token in " + path);
        }
    }
    store.word.resize(static_cast<std::size_t>(count) * dim);
    in.read(reinterpret_cast<char*>(store.word.data()),
            static_cast<std::streamsize>(store.word.size() * sizeof(double)));
    if (!in) throw DataError("truncated vector block in " + path);
    if (in.peek() != std::ifstream::traits_type::eof()) {
        throw DataError("trailing bytes in " + path);
    }
    return store;
}

}  // namespace hypervec
