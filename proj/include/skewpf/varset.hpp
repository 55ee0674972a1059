#ifndef SKEWPF_VARSET_HPP
#define SKEWPF_VARSET_HPP

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewpf {

// An ordered list of distinct variable names. The order is fixed for the
// lifetime of every object referencing the set; polynomials store dense
// exponent vectors indexed by it.
class VariableSet {
public:
    explicit VariableSet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw std::invalid_argument("duplicate variable name: " + names_[i]);
    }

    static std::shared_ptr<const VariableSet> make(std::vector<std::string> names) {
        return std::make_shared<const VariableSet>(std::move(names));
    }

    // x0..x{n-1} style sets.
    static std::shared_ptr<const VariableSet> prefixed(const std::string& prefix, std::size_t n) {
        std::vector<std::string> names;
        names.reserve(n);
        for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
        return make(std::move(names));
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    int index_of(const std::string& name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
    }

    bool operator==(const VariableSet& o) const { return names_ == o.names_; }
    bool operator!=(const VariableSet& o) const { return !(*this == o); }

private:
    std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VariableSet>;

inline bool same_varset(const VarSetPtr& a, const VarSetPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

inline void require_same_varset(const VarSetPtr& a, const VarSetPtr& b) {
    if (!same_varset(a, b)) throw std::invalid_argument("mixed variable sets");
}

}  // namespace skewpf

#endif
