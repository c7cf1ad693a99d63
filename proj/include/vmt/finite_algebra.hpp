#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmt {

/// Set of atom indices in an atomic finite Boolean algebra.
/// Indices are kept sorted and unique; every set of the algebra is a union
/// of atoms, so this representation is lossless.
class AtomSet {
public:
    AtomSet() = default;
    AtomSet(std::initializer_list<uint32_t> idx) : idx_(idx) { normalize(); }
    explicit AtomSet(std::vector<uint32_t> idx) : idx_(std::move(idx)) { normalize(); }

    /// {0, 1, ..., n-1}
    static AtomSet full(uint32_t n) {
        std::vector<uint32_t> v(n);
        for (uint32_t i = 0; i < n; ++i) v[i] = i;
        AtomSet s;
        s.idx_ = std::move(v);
        return s;
    }

    /// Bit-mask constructor, usable whenever all atom indices are < 64.
    static AtomSet from_mask(uint64_t mask) {
        AtomSet s;
        for (uint32_t i = 0; i < 64; ++i)
            if (mask & (1ULL << i)) s.idx_.push_back(i);
        return s;
    }

    uint64_t mask() const {
        uint64_t m = 0;
        for (uint32_t i : idx_) {
            if (i >= 64) throw std::domain_error("AtomSet::mask: atom index >= 64");
            m |= 1ULL << i;
        }
        return m;
    }

    size_t size() const { return idx_.size(); }
    bool empty() const { return idx_.empty(); }
    bool contains(uint32_t i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }
    const std::vector<uint32_t>& indices() const { return idx_; }

    AtomSet set_union(const AtomSet& o) const {
        std::vector<uint32_t> out;
        std::set_union(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                       std::back_inserter(out));
        AtomSet s;
        s.idx_ = std::move(out);
        return s;
    }

    AtomSet set_intersection(const AtomSet& o) const {
        std::vector<uint32_t> out;
        std::set_intersection(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                              std::back_inserter(out));
        AtomSet s;
        s.idx_ = std::move(out);
        return s;
    }

    AtomSet set_difference(const AtomSet& o) const {
        std::vector<uint32_t> out;
        std::set_difference(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                            std::back_inserter(out));
        AtomSet s;
        s.idx_ = std::move(out);
        return s;
    }

    bool disjoint_from(const AtomSet& o) const { return set_intersection(o).empty(); }

    bool operator==(const AtomSet& o) const { return idx_ == o.idx_; }

private:
    void normalize() {
        std::sort(idx_.begin(), idx_.end());
        idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    }
    std::vector<uint32_t> idx_;
};

/// Atomic Boolean algebra on a finite ground set; atoms are 0..n_atoms-1.
struct FiniteAlgebra {
    uint32_t n_atoms = 1;
    std::vector<std::string> atom_labels;  // optional, for reporting

    explicit FiniteAlgebra(uint32_t n = 1, std::vector<std::string> labels = {})
        : n_atoms(n), atom_labels(std::move(labels)) {
        if (n_atoms < 1) throw std::invalid_argument("FiniteAlgebra: n_atoms must be >= 1");
        if (!atom_labels.empty() && atom_labels.size() != n_atoms)
            throw std::invalid_argument("FiniteAlgebra: label count mismatch");
    }

    AtomSet full() const { return AtomSet::full(n_atoms); }

    void require_valid(const AtomSet& a) const {
        if (!a.empty() && a.indices().back() >= n_atoms)
            throw std::out_of_range("AtomSet references atom index >= n_atoms");
    }
};

/// Product of two atomic algebras; atoms are pairs (i, j) flattened to
/// i * right.n_atoms + j.
struct ProductAlgebra {
    FiniteAlgebra left;
    FiniteAlgebra right;

    uint32_t flat(uint32_t i, uint32_t j) const { return i * right.n_atoms + j; }
    std::pair<uint32_t, uint32_t> unflat(uint32_t k) const {
        return {k / right.n_atoms, k % right.n_atoms};
    }
    FiniteAlgebra algebra() const { return FiniteAlgebra(left.n_atoms * right.n_atoms); }
};

/// {(i, j) : i in a, j in b} as a set of the product algebra.
inline AtomSet rectangle(const ProductAlgebra& prod, const AtomSet& a, const AtomSet& b) {
    prod.left.require_valid(a);
    prod.right.require_valid(b);
    std::vector<uint32_t> out;
    out.reserve(a.size() * b.size());
    for (uint32_t i : a.indices())
        for (uint32_t j : b.indices()) out.push_back(prod.flat(i, j));
    return AtomSet(std::move(out));
}

/// Lazy stream over all partitions of a set into nonempty blocks, finest
/// partition first. Internally enumerates restricted-growth strings in
/// descending lexicographic order, so the first partition is all singletons
/// and the last is the single full block.
class PartitionStream {
public:
    PartitionStream(const FiniteAlgebra& algebra, const AtomSet& set) : atoms_(set.indices()) {
        algebra.require_valid(set);
        rgs_.resize(atoms_.size());
        for (size_t i = 0; i < rgs_.size(); ++i) rgs_[i] = static_cast<uint32_t>(i);
        fresh_ = true;
        done_ = false;
    }

    /// Next partition, or nullopt when exhausted. The empty set yields one
    /// empty partition.
    std::optional<std::vector<AtomSet>> next() {
        if (done_) return std::nullopt;
        if (fresh_) {
            fresh_ = false;
            return current();
        }
        if (!advance()) {
            done_ = true;
            return std::nullopt;
        }
        return current();
    }

private:
    std::vector<AtomSet> current() const {
        uint32_t blocks = atoms_.empty() ? 0 : *std::max_element(rgs_.begin(), rgs_.end()) + 1;
        std::vector<std::vector<uint32_t>> groups(blocks);
        for (size_t i = 0; i < atoms_.size(); ++i) groups[rgs_[i]].push_back(atoms_[i]);
        std::vector<AtomSet> out;
        out.reserve(blocks);
        for (auto& g : groups) out.emplace_back(std::move(g));
        return out;
    }

    // Predecessor in lexicographic order: decrement the rightmost positive
    // digit, then make the suffix lexicographically maximal.
    bool advance() {
        if (rgs_.empty()) return false;
        size_t i = rgs_.size();
        while (i > 0 && rgs_[i - 1] == 0) --i;
        if (i == 0) return false;
        --i;
        rgs_[i] -= 1;
        uint32_t prefix_max = 0;
        for (size_t j = 0; j <= i; ++j) prefix_max = std::max(prefix_max, rgs_[j]);
        for (size_t j = i + 1; j < rgs_.size(); ++j) {
            rgs_[j] = prefix_max + 1;
            prefix_max += 1;
        }
        return true;
    }

    std::vector<uint32_t> atoms_;
    std::vector<uint32_t> rgs_;
    bool fresh_ = true;
    bool done_ = false;
};

}  // namespace vmt
