#include "hypervec/hyperbase.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "hypervec/corpus.hpp"
#include "hypervec/error.hpp"

namespace hypervec {

bool HypernymResource::contains(int32_t hypo, int32_t hyper) const {
    auto it = hypernyms_of.find(hypo);
    if (it == hypernyms_of.end())
        return false;
    return std::binary_search(it->second.begin(), it->second.end(), hyper);
}

const std::vector<int32_t>* HypernymResource::hypernyms(int32_t hypo) const {
    auto it = hypernyms_of.find(hypo);
    return it == hypernyms_of.end() ? nullptr : &it->second;
}

size_t HypernymResource::hypernym_count() const {
    std::unordered_set<int32_t> distinct;
    for (const auto& [hypo, hypers] : hypernyms_of)
        distinct.insert(hypers.begin(), hypers.end());
    return distinct.size();
}

HypernymResource load_resource(const std::string& path, const Vocab& vocab) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open resource file: " + path);

    HypernymResource r;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected 2 tab-separated columns");
        std::string hypo = line.substr(0, tab);
        std::string hyper = line.substr(tab + 1);
        if (hypo.empty() || hyper.empty())
            throw DataError(path + ":" + std::to_string(lineno) + ": empty column");

        int32_t hypo_id = vocab.id_of(hypo);
        int32_t hyper_id = vocab.id_of(hyper);
        if (hypo_id < 0 || hyper_id < 0) {
            ++r.dropped_oov;
            continue;
        }
        if (hypo_id == hyper_id) {
            ++r.dropped_self;
            continue;
        }
        r.hypernyms_of[hypo_id].push_back(hyper_id);
    }

    for (auto it = r.hypernyms_of.begin(); it != r.hypernyms_of.end(); ++it) {
        auto& hypers = it->second;
        std::sort(hypers.begin(), hypers.end());
        hypers.erase(std::unique(hypers.begin(), hypers.end()), hypers.end());
        r.pair_count += hypers.size();
    }
    return r;
}

namespace {

// Appends one cycle (found on the current DFS path ending at `repeat`) to the error text.
std::string describe_cycle(const std::vector<int32_t>& path, int32_t repeat, const Vocab& vocab) {
    std::string msg = "hypernym cycle detected: ";
    size_t start = 0;
    while (start < path.size() && path[start] != repeat)
        ++start;
    for (size_t i = start; i < path.size(); ++i)
        msg += vocab.words[path[i]] + " -> ";
    msg += vocab.words[repeat];
    return msg;
}

}  // namespace

HypernymResource transitive_closure(const HypernymResource& r, const Vocab& vocab) {
    // Iterative DFS: gray nodes are on the current path, black nodes have their
    // ancestor set finished in `closed`.
    enum : uint8_t { WHITE = 0, GRAY = 1, BLACK = 2 };
    std::unordered_map<int32_t, uint8_t> color;
    std::unordered_map<int32_t, std::vector<int32_t>> closed;

    struct Frame {
        int32_t node;
        size_t next_child;
    };

    for (const auto& [root, _] : r.hypernyms_of) {
        if (color[root] != WHITE)
            continue;
        std::vector<Frame> stack;
        std::vector<int32_t> path;
        stack.push_back({root, 0});
        color[root] = GRAY;
        path.push_back(root);
        while (!stack.empty()) {
            Frame& f = stack.back();
            const std::vector<int32_t>* hypers = r.hypernyms(f.node);
            size_t n_children = hypers ? hypers->size() : 0;
            if (f.next_child < n_children) {
                int32_t child = (*hypers)[f.next_child++];
                uint8_t c = color[child];
                if (c == GRAY)
                    throw DataError(describe_cycle(path, child, vocab));
                if (c == WHITE) {
                    color[child] = GRAY;
                    path.push_back(child);
                    stack.push_back({child, 0});
                }
            } else {
                // All children closed: ancestors = direct hypernyms + their closures.
                std::vector<int32_t> anc;
                if (hypers) {
                    for (int32_t h : *hypers) {
                        anc.push_back(h);
                        const auto& sub = closed[h];
                        anc.insert(anc.end(), sub.begin(), sub.end());
                    }
                    std::sort(anc.begin(), anc.end());
                    anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
                }
                closed[f.node] = std::move(anc);
                color[f.node] = BLACK;
                path.pop_back();
                stack.pop_back();
            }
        }
    }

    HypernymResource out;
    out.dropped_oov = r.dropped_oov;
    out.dropped_self = r.dropped_self;
    out.removed_eval = r.removed_eval;
    for (const auto& [hypo, _] : r.hypernyms_of) {
        auto& anc = closed[hypo];
        if (!anc.empty()) {
            out.pair_count += anc.size();
            out.hypernyms_of[hypo] = std::move(anc);
        }
    }
    return out;
}

HypernymResource filter_eval_pairs(const HypernymResource& r,
                                   const std::vector<RelationDataset>& datasets,
                                   const Vocab& vocab) {
    std::unordered_set<uint64_t> banned;
    for (const RelationDataset& ds : datasets) {
        for (const RelPair& p : ds.pairs) {
            int32_t u = vocab.id_of(p.u);
            int32_t v = vocab.id_of(p.v);
            if (u < 0 || v < 0)
                continue;
            banned.insert((uint64_t(uint32_t(u)) << 32) | uint32_t(v));
            banned.insert((uint64_t(uint32_t(v)) << 32) | uint32_t(u));
        }
    }

    HypernymResource out;
    out.dropped_oov = r.dropped_oov;
    out.dropped_self = r.dropped_self;
    out.removed_eval = r.removed_eval;
    for (const auto& [hypo, hypers] : r.hypernyms_of) {
        std::vector<int32_t> kept;
        for (int32_t h : hypers) {
            uint64_t key = (uint64_t(uint32_t(hypo)) << 32) | uint32_t(h);
            if (banned.count(key))
                ++out.removed_eval;
            else
                kept.push_back(h);
        }
        if (!kept.empty()) {
            out.pair_count += kept.size();
            out.hypernyms_of[hypo] = std::move(kept);
        }
    }
    return out;
}

}  // namespace hypervec
