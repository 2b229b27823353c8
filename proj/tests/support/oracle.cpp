#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace testing_support {

namespace {

const char* level_text(int level) {
    static const char* names[] = {"it", "tx", "obj", "cont"};
    return names[level];
}

const char* agg_text(OAgg a) {
    switch (a) {
    case OAgg::Sum: return "sum";
    case OAgg::Times: return "times";
    case OAgg::Max: return "max";
    case OAgg::Min: return "min";
    case OAgg::Avg: return "avg";
    case OAgg::Std: return "std";
    case OAgg::SampleStd: return "sstd";
    case OAgg::Pct: return "pct";
    }
    return "?";
}

const char* pol_text(OPolarity p) {
    switch (p) {
    case OPolarity::Positive: return "pos";
    case OPolarity::Negative: return "neg";
    case OPolarity::Either: return "either";
    }
    return "?";
}

std::string columns_text(const std::vector<OColumn>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? ", " : "") + cols[i].text();
    return s;
}

std::string number_text(double v) {
    if (v == std::floor(v)) return std::to_string(static_cast<long long>(v));
    return std::to_string(v);
}

std::optional<long double> agg(OAgg a, const std::vector<long double>& v) {
    const auto n = static_cast<long double>(v.size());
    switch (a) {
    case OAgg::Sum: return std::accumulate(v.begin(), v.end(), 0.0L);
    case OAgg::Times: {
        long double p = 1;
        for (auto x : v) p *= x;
        return p;
    }
    case OAgg::Max:
        if (v.empty()) return std::nullopt;
        return *std::max_element(v.begin(), v.end());
    case OAgg::Min:
        if (v.empty()) return std::nullopt;
        return *std::min_element(v.begin(), v.end());
    case OAgg::Avg:
        if (v.empty()) return std::nullopt;
        return std::accumulate(v.begin(), v.end(), 0.0L) / n;
    case OAgg::Pct:
        if (v.empty()) return std::nullopt;
        return 100 * std::accumulate(v.begin(), v.end(), 0.0L) / n;
    case OAgg::Std:
    case OAgg::SampleStd: {
        if (v.size() < 2) return std::nullopt;
        long double mean = std::accumulate(v.begin(), v.end(), 0.0L) / n;
        long double ss = 0;
        for (auto x : v) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / (a == OAgg::Std ? n : n - 1));
    }
    }
    return std::nullopt;
}

bool polarity_holds(OPolarity p, long double x) {
    switch (p) {
    case OPolarity::Positive: return x > 0;
    case OPolarity::Negative: return x < 0;
    case OPolarity::Either: return x != 0;
    }
    return false;
}

bool all_with(const std::vector<long double>& v, OPolarity p) {
    auto all = [&](OPolarity q) { return std::all_of(v.begin(), v.end(), [&](long double x) { return polarity_holds(q, x); }); };
    if (p == OPolarity::Either) return all(OPolarity::Positive) || all(OPolarity::Negative);
    return all(p);
}

std::size_t offset(const std::array<std::size_t, 4>& dims, OColumn c) {
    std::size_t off = 0;
    for (int l = 0; l < c.level; ++l) off += dims[static_cast<std::size_t>(l)];
    return off + c.index;
}

// Evaluates a row function on one vector addressed by `pos`.
std::optional<long double> row_value(const ORow& row, const std::vector<long double>& values,
                                     const std::vector<std::size_t>& pos, const std::vector<double>* full_row,
                                     const std::array<std::size_t, 4>& dims) {
    std::vector<long double> picked;
    for (auto p : pos) picked.push_back(values[p]);
    switch (row.kind) {
    case ORow::Kind::Filter: return picked.at(0);
    case ORow::Kind::Aggregate: return agg(row.aggregate, picked);
    case ORow::Kind::Coherent: return all_with(picked, row.polarity) ? 1.0L : 0.0L;
    case ORow::Kind::Disagree: {
        const auto& r = *full_row;
        return row.a.holds(r[offset(dims, row.a.column)]) && row.b.holds(r[offset(dims, row.b.column)]) ? 1.0L : 0.0L;
    }
    }
    return std::nullopt;
}

std::vector<double> column_of(const std::vector<std::vector<double>>& rows, std::size_t c) {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

bool constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// Indices into tx.sequence of the occurrences used for the pattern, or empty
// when unsupported.
std::optional<std::vector<std::size_t>> embed(const GenTransaction& tx, const std::vector<int>& items, OMode mode) {
    const auto& s = tx.sequence;
    std::vector<std::size_t> out;
    switch (mode) {
    case OMode::Itemset:
        for (int item : items) {
            auto it = std::find_if(s.begin(), s.end(), [&](const GenOccurrence& g) { return g.item == item; });
            if (it == s.end()) return std::nullopt;
            out.push_back(static_cast<std::size_t>(it - s.begin()));
        }
        return out;
    case OMode::Sequence: {
        std::size_t from = 0;
        for (int item : items) {
            while (from < s.size() && s[from].item != item) ++from;
            if (from == s.size()) return std::nullopt;
            out.push_back(from++);
        }
        return out;
    }
    case OMode::Contiguous:
        for (std::size_t start = 0; start + items.size() <= s.size(); ++start) {
            bool ok = true;
            for (std::size_t k = 0; k < items.size() && ok; ++k) ok = s[start + k].item == items[k];
            if (ok) {
                for (std::size_t k = 0; k < items.size(); ++k) out.push_back(start + k);
                return out;
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

double facet_from(const GenDataset& d, int item, const GenTransaction& tx, OColumn c) {
    switch (c.level) {
    case 0: return d.item_facets[static_cast<std::size_t>(item)][c.index];
    case 1: return tx.facets[c.index];
    case 2: return d.objects[static_cast<std::size_t>(tx.object)].facets[c.index];
    default:
        return d.container_facets[static_cast<std::size_t>(d.objects[static_cast<std::size_t>(tx.object)].container)][c.index];
    }
}

const std::vector<double>& level_facets(const GenDataset& d, const GenTransaction& tx, int level) {
    if (level == 1) return tx.facets;
    const auto& obj = d.objects[static_cast<std::size_t>(tx.object)];
    if (level == 2) return obj.facets;
    return d.container_facets[static_cast<std::size_t>(obj.container)];
}

bool occurs_in(const GenTransaction& tx, int item) {
    return std::any_of(tx.sequence.begin(), tx.sequence.end(), [&](const GenOccurrence& g) { return g.item == item; });
}

bool useful(const GenDataset& d, int item, const OFilter& f) {
    bool seen = false;
    for (const auto& tx : d.transactions) {
        if (!occurs_in(tx, item)) continue;
        seen = true;
        switch (f.kind) {
        case OFilter::Kind::All: return true;
        case OFilter::Kind::NonZero: {
            const auto& v = f.level == 0 ? d.item_facets[static_cast<std::size_t>(item)] : level_facets(d, tx, f.level);
            if (f.index >= 0 ? v[static_cast<std::size_t>(f.index)] != 0
                             : std::any_of(v.begin(), v.end(), [](double x) { return x != 0; }))
                return true;
            break;
        }
        case OFilter::Kind::Disagreement:
            if (f.a.holds(facet_from(d, item, tx, f.a.column)) && f.b.holds(facet_from(d, item, tx, f.b.column)))
                return true;
            break;
        }
    }
    (void)seen;
    return false;
}

bool mask_ok(const GenDataset& d, const std::vector<int>& items, const OMask& m) {
    if (m.kind == OMask::Kind::Size) return items.size() >= m.lo && items.size() <= m.hi;
    if (items.size() < m.trigger) return true;
    for (const auto& name : m.required) {
        auto it = std::find(d.category_names.begin(), d.category_names.end(), name);
        if (it == d.category_names.end()) return false;
        const int cat = static_cast<int>(it - d.category_names.begin());
        bool found = false;
        for (int item : items) {
            const auto& cats = d.item_categories[static_cast<std::size_t>(item)];
            if (std::find(cats.begin(), cats.end(), cat) != cats.end()) found = true;
        }
        if (!found) return false;
    }
    return true;
}

std::vector<double> occurrence_row(const GenDataset& d, const GenTransaction& tx, const std::vector<int>& items,
                                   const std::vector<std::size_t>& used, int intra) {
    std::vector<double> row;
    for (std::size_t k = 0; k < d.dims[0]; ++k) {
        std::vector<long double> products;
        for (std::size_t j = 0; j < items.size(); ++j) {
            const auto& occ = tx.sequence[used[j]];
            products.push_back(static_cast<long double>(d.item_facets[static_cast<std::size_t>(occ.item)][k]) *
                               occ.quantity);
        }
        const OAgg a = intra == 0 ? OAgg::Sum : intra == 1 ? OAgg::Max : intra == 2 ? OAgg::Min : OAgg::Avg;
        row.push_back(static_cast<double>(*agg(a, products)));
    }
    for (int level = 1; level <= 3; ++level) {
        const auto& v = level_facets(d, tx, level);
        row.insert(row.end(), v.begin(), v.end());
    }
    return row;
}

// Fraction-free elimination on a small integer matrix.
std::size_t exact_rank(std::vector<std::vector<__int128>> m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::size_t rank = 0;
    __int128 prev = 1;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                __int128 num = m[rank][c] * m[i][j] - m[i][c] * m[rank][j];
                if (num % prev != 0) throw std::logic_error("fraction-free elimination lost exactness");
                m[i][j] = num / prev;
            }
            m[i][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return rank;
}

template <class T>
T pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

} // namespace

std::string OColumn::text() const { return std::string(level_text(level)) + "." + std::to_string(index); }

bool OCondition::holds(double x) const {
    if (op == "<") return x < value;
    if (op == "<=") return x <= value;
    if (op == "=") return x == value;
    if (op == "!=") return x != value;
    if (op == ">=") return x >= value;
    return x > value;
}

std::string OCondition::text() const { return column.text() + op + number_text(value); }

std::string ORow::text() const {
    switch (kind) {
    case Kind::Filter: return "filter(" + columns_text(columns) + ")";
    case Kind::Aggregate: return std::string(agg_text(aggregate)) + "(" + columns_text(columns) + ")";
    case Kind::Coherent: return "coherent(" + columns_text(columns) + "; " + pol_text(polarity) + ")";
    case Kind::Disagree: return "disagree(" + a.text() + ", " + b.text() + ")";
    }
    return "?";
}

std::string OUtility::text() const {
    switch (kind) {
    case Kind::Horizontal:
        return "hfirst:" + row.text() + (explicit_column_aggregate ? std::string(":") + agg_text(column_aggregate) : "");
    case Kind::Vertical: return std::string("vfirst:") + agg_text(column_aggregate) + ":" + row.text();
    case Kind::MixedCoherence:
        return "vfirst:mixcoh(" + a.text() + ", " + b.text() + "; " + pol_text(pa) + ", " + pol_text(pb) + ")";
    case Kind::Pearson: return "mixed:pearson(" + a.text() + ", " + b.text() + ")";
    case Kind::MultipleCorrelation: return "mixed:multicorr(" + columns_text(predictors) + "; " + target.text() + ")";
    }
    return "?";
}

std::string OUtility::intra_text() const {
    static const char* names[] = {"sum", "max", "min", "avg"};
    return names[intra];
}

std::string OFilter::text() const {
    switch (kind) {
    case Kind::All: return "all";
    case Kind::NonZero:
        return std::string("nonzero(") + level_text(level) + (index >= 0 ? "." + std::to_string(index) : "") + ")";
    case Kind::Disagreement: return "disagree(" + a.text() + ", " + b.text() + ")";
    }
    return "?";
}

std::string OMask::text() const {
    if (kind == Kind::Size) return "size:" + std::to_string(lo) + ".." + std::to_string(hi);
    std::string s = "cover:";
    for (std::size_t i = 0; i < required.size(); ++i) s += (i ? "," : "") + required[i];
    return s + "@" + std::to_string(trigger);
}

std::string OQuery::describe() const {
    static const char* modes[] = {"itemset", "sequence", "contiguous"};
    std::string s = std::string("mode=") + modes[static_cast<int>(mode)] + " th_f=" + std::to_string(min_support) +
                    " size=" + std::to_string(min_length) + ".." + std::to_string(max_length) +
                    " filter=" + filter.text();
    if (utility) s += " utility=" + utility->text() + " intra=" + utility->intra_text() + " th_u=" + std::to_string(min_utility);
    for (const auto& m : masks) s += " mask=" + m.text();
    return s;
}

std::optional<double> oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2 || constant(x) || constant(y)) return std::nullopt;
    const long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double num = n * sxy - sx * sy;
    const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return static_cast<double>(num / den);
}

std::optional<double> oracle_multiple_correlation(const std::vector<std::vector<double>>& xs, const std::vector<double>& y) {
    const std::size_t p = xs.size(), n = y.size();
    if (p == 0 || n <= p || constant(y)) return std::nullopt;

    // n*x - sum(x) keeps centred integer data integral.
    std::vector<std::vector<__int128>> m(n, std::vector<__int128>(p));
    for (std::size_t j = 0; j < p; ++j) {
        long long sum = 0;
        for (double v : xs[j]) sum += static_cast<long long>(v);
        for (std::size_t i = 0; i < n; ++i)
            m[i][j] = static_cast<__int128>(static_cast<long long>(n) * static_cast<long long>(xs[j][i]) - sum);
    }
    if (exact_rank(m) < p) return std::nullopt;

    std::vector<std::vector<long double>> xc(p, std::vector<long double>(n));
    std::vector<long double> yc(n);
    const long double my = std::accumulate(y.begin(), y.end(), 0.0L) / static_cast<long double>(n);
    for (std::size_t i = 0; i < n; ++i) yc[i] = y[i] - my;
    for (std::size_t j = 0; j < p; ++j) {
        const long double mx = std::accumulate(xs[j].begin(), xs[j].end(), 0.0L) / static_cast<long double>(n);
        for (std::size_t i = 0; i < n; ++i) xc[j][i] = xs[j][i] - mx;
    }
    // Normal equations, Gaussian elimination with partial pivoting.
    std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1));
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t c = 0; c < p; ++c)
            for (std::size_t i = 0; i < n; ++i) a[r][c] += xc[r][i] * xc[c][i];
        for (std::size_t i = 0; i < n; ++i) a[r][p] += xc[r][i] * yc[i];
    }
    const std::vector<long double> rhs = [&] {
        std::vector<long double> b(p);
        for (std::size_t r = 0; r < p; ++r) b[r] = a[r][p];
        return b;
    }();
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t best = c;
        for (std::size_t r = c + 1; r < p; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[best][c])) best = r;
        std::swap(a[c], a[best]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            const long double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
        }
    }
    long double explained = 0, total = 0;
    for (std::size_t j = 0; j < p; ++j) explained += (a[j][p] / a[j][j]) * rhs[j];
    for (auto v : yc) total += v * v;
    long double r2 = std::clamp(explained / total, 0.0L, 1.0L);
    return static_cast<double>(std::sqrt(r2));
}

std::optional<double> oracle_utility(const std::vector<std::vector<double>>& rows, const std::array<std::size_t, 4>& dims,
                                     const OUtility& u) {
    if (rows.empty()) return std::nullopt;
    std::optional<long double> result;
    switch (u.kind) {
    case OUtility::Kind::Horizontal: {
        std::vector<std::size_t> pos;
        for (auto c : u.row.columns) pos.push_back(offset(dims, c));
        std::vector<long double> per_row;
        for (const auto& r : rows) {
            std::vector<long double> values(r.begin(), r.end());
            auto v = row_value(u.row, values, pos, &r, dims);
            if (!v) return std::nullopt;
            per_row.push_back(*v);
        }
        const OAgg column = u.explicit_column_aggregate ? u.column_aggregate : OAgg::Pct;
        result = agg(column, per_row);
        break;
    }
    case OUtility::Kind::Vertical: {
        std::vector<long double> reduced;
        std::vector<std::size_t> pos;
        for (auto c : u.row.columns) {
            std::vector<long double> col;
            for (const auto& r : rows) col.push_back(r[offset(dims, c)]);
            auto v = agg(u.column_aggregate, col);
            if (!v) return std::nullopt;
            pos.push_back(reduced.size());
            reduced.push_back(*v);
        }
        result = row_value(u.row, reduced, pos, nullptr, dims);
        break;
    }
    case OUtility::Kind::MixedCoherence: {
        long double na = 0, nb = 0;
        for (const auto& r : rows) {
            if (polarity_holds(u.pa, r[offset(dims, u.a)])) ++na;
            if (polarity_holds(u.pb, r[offset(dims, u.b)])) ++nb;
        }
        const auto n = static_cast<long double>(rows.size());
        result = (na / n) * (nb / n);
        break;
    }
    case OUtility::Kind::Pearson:
        return oracle_pearson(column_of(rows, offset(dims, u.a)), column_of(rows, offset(dims, u.b)));
    case OUtility::Kind::MultipleCorrelation: {
        std::vector<std::vector<double>> xs;
        for (auto c : u.predictors) xs.push_back(column_of(rows, offset(dims, c)));
        return oracle_multiple_correlation(xs, column_of(rows, offset(dims, u.target)));
    }
    }
    if (!result || !std::isfinite(static_cast<double>(*result))) return std::nullopt;
    return static_cast<double>(*result);
}

std::vector<OPattern> oracle_mine(const GenDataset& d, const OQuery& q) {
    std::vector<int> items;
    for (int i = 0; i < static_cast<int>(d.item_count()); ++i)
        if (useful(d, i, q.filter)) items.push_back(i);

    std::vector<std::vector<int>> candidates;
    std::vector<int> current;
    // Itemsets: strictly increasing indices. Sequences: any indices.
    auto extend = [&](auto&& self, std::size_t from) -> void {
        if (!current.empty()) candidates.push_back(current);
        if (current.size() == q.max_length) return;
        const std::size_t start = q.mode == OMode::Itemset ? from : 0;
        for (std::size_t k = start; k < items.size(); ++k) {
            current.push_back(items[k]);
            self(self, k + 1);
            current.pop_back();
        }
    };
    extend(extend, 0);

    std::vector<OPattern> out;
    for (const auto& cand : candidates) {
        if (cand.size() < q.min_length) continue;
        if (!std::all_of(q.masks.begin(), q.masks.end(), [&](const OMask& m) { return mask_ok(d, cand, m); })) continue;
        OPattern p;
        p.items = cand;
        std::vector<std::vector<double>> rows;
        for (std::size_t t = 0; t < d.transactions.size(); ++t) {
            auto used = embed(d.transactions[t], cand, q.mode);
            if (!used) continue;
            p.support.push_back(static_cast<int>(t));
            if (q.utility) rows.push_back(occurrence_row(d, d.transactions[t], cand, *used, q.utility->intra));
        }
        if (p.support.size() < q.min_support) continue;
        if (q.utility) {
            p.utility = oracle_utility(rows, d.dims, *q.utility);
            if (!p.utility || !(*p.utility > q.min_utility)) continue;
        }
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), [](const OPattern& a, const OPattern& b) {
        if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
        return a.items < b.items;
    });
    return out;
}

OQuery random_query(std::mt19937_64& rng, const GenDataset& d, OMode mode, int utility_kind) {
    OQuery q;
    q.mode = mode;
    const int s = uniform(rng, 0, 9);
    q.min_support = s < 5 ? 1 : s < 8 ? 2 : 3;
    q.min_length = static_cast<std::size_t>(uniform(rng, 1, 2));
    q.max_length = static_cast<std::size_t>(uniform(rng, static_cast<int>(q.min_length), mode == OMode::Itemset ? 4 : 3));

    std::vector<OColumn> all, non_item;
    for (int level = 0; level < 4; ++level)
        for (std::size_t i = 0; i < d.dims[static_cast<std::size_t>(level)]; ++i) {
            all.push_back({level, i});
            if (level > 0) non_item.push_back({level, i});
        }
    const std::vector<std::string> ops = {"<", "<=", "=", "!=", ">=", ">"};
    auto condition = [&](const std::vector<OColumn>& from) {
        return OCondition{pick(rng, from), pick(rng, ops), static_cast<double>(uniform(rng, -1, 2))};
    };
    auto some_columns = [&](std::size_t max) {
        std::vector<OColumn> cols;
        const auto k = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(std::min(max, all.size()))));
        for (std::size_t i = 0; i < k; ++i) cols.push_back(pick(rng, all));
        return cols;
    };
    const std::vector<OAgg> aggs = {OAgg::Sum, OAgg::Times, OAgg::Max, OAgg::Min,
                                    OAgg::Avg, OAgg::Std,   OAgg::SampleStd, OAgg::Pct};
    const std::vector<OPolarity> pols = {OPolarity::Positive, OPolarity::Negative, OPolarity::Either};

    // Filter.
    const int f = uniform(rng, 0, 9);
    if (f >= 6 && f < 8 && !all.empty()) {
        q.filter.kind = OFilter::Kind::NonZero;
        auto c = pick(rng, all);
        q.filter.level = c.level;
        q.filter.index = uniform(rng, 0, 1) ? static_cast<int>(c.index) : -1;
    } else if (f >= 8 && !all.empty()) {
        q.filter.kind = OFilter::Kind::Disagreement;
        q.filter.a = condition(all);
        q.filter.b = condition(all);
    }

    // Utility.
    int kind = utility_kind >= 0 ? utility_kind : uniform(rng, -1, kUtilityKinds - 1);
    if (kind >= 0 && !all.empty()) {
        OUtility u;
        u.intra = d.dims[0] > 0 ? uniform(rng, 0, 3) : 0;
        switch (kind) {
        case 0: // hfirst filter
            u.kind = OUtility::Kind::Horizontal;
            u.row.kind = ORow::Kind::Filter;
            u.row.columns = {pick(rng, all)};
            u.column_aggregate = pick(rng, aggs);
            break;
        case 1: // hfirst row aggregate
            u.kind = OUtility::Kind::Horizontal;
            u.row.kind = ORow::Kind::Aggregate;
            u.row.aggregate = pick(rng, aggs);
            u.row.columns = some_columns(3);
            u.column_aggregate = pick(rng, aggs);
            break;
        case 2: // coherence degree
            u.kind = OUtility::Kind::Horizontal;
            u.row.kind = ORow::Kind::Coherent;
            u.row.columns = some_columns(3);
            u.row.polarity = pick(rng, pols);
            u.explicit_column_aggregate = uniform(rng, 0, 3) != 0;
            u.column_aggregate = OAgg::Pct;
            break;
        case 3: // disagreement degree
            u.kind = OUtility::Kind::Horizontal;
            u.row.kind = ORow::Kind::Disagree;
            u.row.a = condition(all);
            u.row.b = condition(all);
            u.explicit_column_aggregate = uniform(rng, 0, 1) != 0;
            u.column_aggregate = OAgg::Pct;
            break;
        case 4: // vfirst filter
            u.kind = OUtility::Kind::Vertical;
            u.row.kind = ORow::Kind::Filter;
            u.row.columns = {pick(rng, all)};
            u.column_aggregate = pick(rng, aggs);
            break;
        case 5: // vfirst: max_sum, std_max and friends
            u.kind = OUtility::Kind::Vertical;
            u.row.kind = ORow::Kind::Aggregate;
            u.row.aggregate = pick(rng, aggs);
            u.row.columns = some_columns(3);
            u.column_aggregate = pick(rng, aggs);
            break;
        case 6:
            u.kind = OUtility::Kind::MixedCoherence;
            u.a = pick(rng, all);
            u.b = pick(rng, all);
            u.pa = pick(rng, pols);
            u.pb = pick(rng, pols);
            break;
        case 7:
            u.kind = OUtility::Kind::Pearson;
            u.a = pick(rng, all);
            u.b = pick(rng, all);
            for (int retry = 0; retry < 4 && u.a.level == u.b.level && u.a.index == u.b.index; ++retry) u.b = pick(rng, all);
            break;
        default:
            if (non_item.size() < 2) {
                kind = -1;
                break;
            }
            u.kind = OUtility::Kind::MultipleCorrelation;
            u.target = pick(rng, non_item);
            {
                std::vector<OColumn> others;
                for (auto c : non_item)
                    if (c.level != u.target.level || c.index != u.target.index) others.push_back(c);
                std::shuffle(others.begin(), others.end(), rng);
                const int k = uniform(rng, 1, std::min(3, static_cast<int>(others.size())));
                u.predictors.assign(others.begin(), others.begin() + k);
                // Occasionally a repeated or target column: rank-deficient or trivially perfect fits.
                if (uniform(rng, 0, 5) == 0) u.predictors.push_back(uniform(rng, 0, 1) ? u.predictors.front() : u.target);
            }
            break;
        }
        if (kind >= 0) {
            q.utility = u;
            static const double thresholds[] = {-1e18, -1e18, -1e18, -1e18, 0.37, 1.37, 33.37, 50.37, -0.63, 2.37};
            q.min_utility = thresholds[uniform(rng, 0, 9)];
        }
    }

    // Masks.
    if (uniform(rng, 0, 3) == 0) {
        OMask m;
        m.lo = static_cast<std::size_t>(uniform(rng, 1, 2));
        m.hi = static_cast<std::size_t>(uniform(rng, static_cast<int>(m.lo), 4));
        q.masks.push_back(m);
    }
    if (d.with_categories && uniform(rng, 0, 3) == 0) {
        OMask m;
        m.kind = OMask::Kind::Cover;
        std::vector<std::string> names = d.category_names;
        names.push_back("pron"); // never assigned
        m.required.push_back(pick(rng, names));
        if (uniform(rng, 0, 1)) m.required.push_back(pick(rng, names));
        m.trigger = static_cast<std::size_t>(uniform(rng, 1, 3));
        q.masks.push_back(m);
    }
    return q;
}

} // namespace testing_support
