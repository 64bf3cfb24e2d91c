#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hypervec {

struct RelPair {
    std::string u;
    std::string v;
    std::string relation;
    std::optional<double> graded;
};

// Labeled word pairs for evaluation: "u TAB v TAB relation [TAB graded]".
struct RelationDataset {
    std::string name;
    std::vector<RelPair> pairs;
};

RelationDataset load_dataset(const std::string& path, const std::string& name = "");

}  // namespace hypervec
