#include "hypervec/dataset.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "hypervec/error.hpp"

namespace hypervec {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

}  // namespace

RelationDataset load_dataset(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open dataset file: " + path);

    RelationDataset ds;
    ds.name = name.empty() ? path : name;

    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 3 && fields.size() != 4)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected 3 or 4 tab-separated columns, got " +
                            std::to_string(fields.size()));
        for (size_t i = 0; i < fields.size(); ++i)
            if (fields[i].empty())
                throw DataError(path + ":" + std::to_string(lineno) + ": empty column " +
                                std::to_string(i + 1));

        RelPair p;
        p.u = fields[0];
        p.v = fields[1];
        p.relation = fields[2];
        if (fields.size() == 4) {
            const char* s = fields[3].c_str();
            char* end = nullptr;
            double g = std::strtod(s, &end);
            if (end == s || *end != '\0' || !std::isfinite(g))
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": bad graded score: " + fields[3]);
            p.graded = g;
        }
        ds.pairs.push_back(std::move(p));
    }
    if (ds.pairs.empty())
        throw DataError("dataset has no pairs: " + path);
    return ds;
}

}  // namespace hypervec
