#include "taxonomy.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hypervec/rng.hpp"

using hypervec::Rng;

namespace {

std::string name(const char* prefix, int a, int b = -1, int c = -1) {
    char buf[64];
    if (c >= 0)
        std::snprintf(buf, sizeof buf, "%s%d_%d_%d", prefix, a, b, c);
    else if (b >= 0)
        std::snprintf(buf, sizeof buf, "%s%d_%d", prefix, a, b);
    else
        std::snprintf(buf, sizeof buf, "%s%d", prefix, a);
    return buf;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

TaxonomyData write_taxonomy_corpus(const TaxonomySpec& spec, const std::string& corpus_path) {
    TaxonomyData tax;
    tax.spec = spec;

    int n_mids = spec.roots * spec.mids_per_root;
    int n_leaves = n_mids * spec.leaves_per_mid;

    std::vector<std::vector<std::string>> root_ctx(spec.roots), mid_ctx(n_mids),
        leaf_ctx(n_leaves), fam_ctx(n_mids), dom_ctx(spec.roots);
    for (int r = 0; r < spec.roots; ++r) {
        tax.roots.push_back(name("r", r));
        for (int t = 0; t < spec.root_ctx; ++t)
            root_ctx[r].push_back(name("cr", r, t));
        for (int t = 0; t < spec.domain_ctx; ++t)
            dom_ctx[r].push_back(name("cd", r, t));
        for (int j = 0; j < spec.mids_per_root; ++j) {
            int m = r * spec.mids_per_root + j;
            tax.mids.push_back(name("m", r, j));
            for (int t = 0; t < spec.mid_ctx; ++t)
                mid_ctx[m].push_back(name("cm", r, j, t));
            for (int t = 0; t < spec.family_ctx; ++t)
                fam_ctx[m].push_back(name("cf", r, j, t));
            for (int k = 0; k < spec.leaves_per_mid; ++k) {
                int l = m * spec.leaves_per_mid + k;
                tax.leaves.push_back(name("l", r, j) + "_" + std::to_string(k));
                for (int t = 0; t < spec.leaf_ctx; ++t)
                    leaf_ctx[l].push_back(name("cl", r, j, k) + "_" + std::to_string(t));
            }
        }
    }

    for (int l = 0; l < n_leaves; ++l) {
        int m = l / spec.leaves_per_mid;
        int r = m / spec.mids_per_root;
        tax.all_pairs.emplace_back(tax.leaves[l], tax.mids[m]);
        tax.all_pairs.emplace_back(tax.leaves[l], tax.roots[r]);
    }
    for (int m = 0; m < n_mids; ++m)
        tax.all_pairs.emplace_back(tax.mids[m], tax.roots[m / spec.mids_per_root]);

    // Per-node token and draw pools, leaves first, then mids, then roots.
    // Every node has its own distinctive inventory; hypernyms additionally
    // draw from the union of their descendants' inventories, so a hyponym's
    // distinctive contexts all occur with its hypernyms while each hypernym
    // keeps contexts its hyponyms never use.
    int n_nodes = n_leaves + n_mids + spec.roots;
    std::vector<const std::string*> node_token(n_nodes);
    std::vector<std::vector<const std::string*>> own(n_nodes), sub(n_nodes);
    std::vector<int> root_of(n_nodes);
    for (int l = 0; l < n_leaves; ++l)
        root_of[l] = l / spec.leaves_per_mid / spec.mids_per_root;
    for (int m = 0; m < n_mids; ++m)
        root_of[n_leaves + m] = m / spec.mids_per_root;
    for (int r = 0; r < spec.roots; ++r)
        root_of[n_leaves + n_mids + r] = r;
    for (int l = 0; l < n_leaves; ++l) {
        node_token[l] = &tax.leaves[l];
        for (const auto& c : leaf_ctx[l])
            own[l].push_back(&c);
        for (const auto& c : fam_ctx[l / spec.leaves_per_mid])
            own[l].push_back(&c);
    }
    for (int m = 0; m < n_mids; ++m) {
        int node = n_leaves + m;
        node_token[node] = &tax.mids[m];
        for (const auto& c : mid_ctx[m])
            own[node].push_back(&c);
        for (const auto& c : fam_ctx[m])
            sub[node].push_back(&c);
        for (int k = 0; k < spec.leaves_per_mid; ++k)
            for (const auto& c : leaf_ctx[m * spec.leaves_per_mid + k])
                sub[node].push_back(&c);
    }
    for (int r = 0; r < spec.roots; ++r) {
        int node = n_leaves + n_mids + r;
        node_token[node] = &tax.roots[r];
        for (const auto& c : root_ctx[r])
            own[node].push_back(&c);
        for (int j = 0; j < spec.mids_per_root; ++j) {
            int m = r * spec.mids_per_root + j;
            for (const auto& c : mid_ctx[m])
                sub[node].push_back(&c);
            for (const auto& c : fam_ctx[m])
                sub[node].push_back(&c);
            for (int k = 0; k < spec.leaves_per_mid; ++k)
                for (const auto& c : leaf_ctx[m * spec.leaves_per_mid + k])
                    sub[node].push_back(&c);
        }
    }

    std::vector<double> cum(n_nodes);
    double acc = 0.0;
    for (int n = 0; n < n_nodes; ++n) {
        acc += n < n_leaves           ? spec.leaf_weight
               : n < n_leaves + n_mids ? spec.mid_weight
                                       : spec.root_weight;
        cum[n] = acc;
    }

    std::vector<std::string> filler(spec.filler_vocab);
    for (int f = 0; f < spec.filler_vocab; ++f)
        filler[f] = name("f", f);

    std::ofstream out(corpus_path);
    if (!out)
        throw std::runtime_error("cannot write corpus: " + corpus_path);
    Rng rng(spec.seed);
    std::vector<const std::string*> tokens;
    for (long long line = 0; line < spec.lines; ++line) {
        double u = rng.next_double() * acc;
        int node = int(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
        if (node >= n_nodes)
            node = n_nodes - 1;
        tokens.clear();
        tokens.push_back(node_token[node]);
        for (int t = 0; t < spec.ctx_per_line; ++t) {
            if (!filler.empty() && rng.next_double() < spec.filler_frac) {
                tokens.push_back(&filler[rng.below(filler.size())]);
                continue;
            }
            const auto& dom = dom_ctx[root_of[node]];
            if (!dom.empty() && rng.next_double() < spec.domain_frac) {
                tokens.push_back(&dom[rng.below(dom.size())]);
                continue;
            }
            const auto& p = !sub[node].empty() && rng.next_double() < spec.hyper_sub_frac
                                ? sub[node]
                                : own[node];
            tokens.push_back(p[rng.below(p.size())]);
        }
        shuffle(tokens, rng);
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i)
                out << ' ';
            out << *tokens[i];
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + corpus_path);
    return tax;
}

void split_pairs(const TaxonomyData& tax, std::uint64_t seed, std::size_t n_resource,
                 std::size_t n_heldout,
                 std::vector<std::pair<std::string, std::string>>* resource,
                 std::vector<std::pair<std::string, std::string>>* heldout) {
    auto pairs = tax.all_pairs;
    if (n_resource + n_heldout > pairs.size())
        throw std::runtime_error("taxonomy has too few pairs for the requested split");
    Rng rng(seed);
    shuffle(pairs, rng);
    resource->assign(pairs.begin(), pairs.begin() + n_resource);
    heldout->assign(pairs.begin() + n_resource, pairs.begin() + n_resource + n_heldout);
}

std::vector<std::pair<std::string, std::string>> cohypo_pairs(const TaxonomyData& tax,
                                                              std::uint64_t seed, std::size_t n) {
    std::vector<std::pair<std::string, std::string>> all;
    int n_mids = tax.spec.roots * tax.spec.mids_per_root;
    for (int m = 0; m < n_mids; ++m)
        for (int a = 0; a < tax.spec.leaves_per_mid; ++a)
            for (int b = a + 1; b < tax.spec.leaves_per_mid; ++b)
                all.emplace_back(tax.leaves[m * tax.spec.leaves_per_mid + a],
                                 tax.leaves[m * tax.spec.leaves_per_mid + b]);
    if (n > all.size())
        throw std::runtime_error("not enough co-hyponym pairs");
    Rng rng(seed);
    shuffle(all, rng);
    all.resize(n);
    return all;
}

std::vector<std::pair<std::string, std::string>> random_cross_pairs(const TaxonomyData& tax,
                                                                    std::uint64_t seed,
                                                                    std::size_t n) {
    // Node list with its root, leaves + mids + roots.
    std::vector<std::pair<const std::string*, int>> nodes;
    int n_mids = tax.spec.roots * tax.spec.mids_per_root;
    for (std::size_t l = 0; l < tax.leaves.size(); ++l)
        nodes.emplace_back(&tax.leaves[l],
                           int(l) / tax.spec.leaves_per_mid / tax.spec.mids_per_root);
    for (int m = 0; m < n_mids; ++m)
        nodes.emplace_back(&tax.mids[m], m / tax.spec.mids_per_root);
    for (int r = 0; r < tax.spec.roots; ++r)
        nodes.emplace_back(&tax.roots[r], r);

    Rng rng(seed);
    std::vector<std::pair<std::string, std::string>> out;
    while (out.size() < n) {
        const auto& a = nodes[rng.below(nodes.size())];
        const auto& b = nodes[rng.below(nodes.size())];
        if (a.second == b.second)
            continue;
        out.emplace_back(*a.first, *b.first);
    }
    return out;
}
