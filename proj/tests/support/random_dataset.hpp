#pragma once

// Seeded random datasets for oracle and property tests. The generator keeps
// its own plain representation so that test oracles never go through the
// engine's Dataset.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

struct GenOccurrence {
    int item;
    int quantity;
};

struct GenTransaction {
    int object;
    std::vector<GenOccurrence> sequence; // in position order
    std::vector<double> facets;
};

struct GenObject {
    int container;
    std::vector<double> facets;
};

struct GenDataset {
    // l, m, n, o
    std::array<std::size_t, 4> dims{};
    std::vector<std::vector<double>> item_facets;
    std::vector<GenTransaction> transactions;
    std::vector<GenObject> objects;
    std::vector<std::vector<double>> container_facets;
    std::vector<std::vector<int>> item_categories; // indices into category_names
    std::vector<std::string> category_names;
    bool with_categories = false;

    std::size_t item_count() const { return item_facets.size(); }
    // Names sort in index order, matching the engine's id assignment.
    static std::string item_name(int i) { return "i" + std::to_string(i); }
    static std::string transaction_name(int t);
    static std::string object_name(int o) { return "o" + std::to_string(o); }
    static std::string container_name(int c) { return "c" + std::to_string(c); }

    std::string to_facts() const;
};

struct GenOptions {
    std::size_t max_items = 8;
    std::size_t max_transactions = 12;
    std::size_t max_facets = 3;
    int min_value = -2;
    int max_value = 3;
    int max_quantity = 3;
    // Allow an item to occur more than once in a transaction.
    bool repeats = true;
    bool categories = true;
};

GenDataset random_dataset(std::mt19937_64& rng, const GenOptions& options = {});

} // namespace testing_support
