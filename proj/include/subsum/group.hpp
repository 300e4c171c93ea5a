#pragma once

#include <compare>
#include <cstdint>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subsum {

/// Index of a group element in mixed radix, first factor least significant.
/// Index 0 is the identity.
struct Element {
    std::uint64_t index = 0;

    friend auto operator<=>(const Element&, const Element&) = default;
};

/// A finite abelian group Z_{n_1} x ... x Z_{n_t}, factors kept in the order given.
class GroupSpec {
public:
    explicit GroupSpec(std::vector<std::uint64_t> factors);

    static GroupSpec cyclic(std::uint64_t n) { return GroupSpec({n}); }

    /// Parses "101" or "2,2,2". Rejects empty input, non-digits, and factors < 2.
    static GroupSpec parse(std::string_view text);

    std::span<const std::uint64_t> factors() const { return factors_; }
    std::uint64_t order() const { return order_; }
    std::size_t rank() const { return factors_.size(); }
    bool is_cyclic() const { return factors_.size() == 1; }
    /// Single prime factor: the additive group of F_p.
    bool is_prime_cyclic() const;

    /// Product of the factors below coordinate i (the stride of digit i).
    std::uint64_t stride(std::size_t i) const { return strides_[i]; }

    std::string to_string() const;

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.factors_ == b.factors_; }

private:
    std::vector<std::uint64_t> factors_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t order_ = 1;
};

/// Throws ContractError unless x.index < g.order().
void check_element(const GroupSpec& g, Element x);

std::vector<std::uint64_t> decode(const GroupSpec& g, Element x);
Element encode(const GroupSpec& g, std::span<const std::uint64_t> digits);

Element add(const GroupSpec& g, Element a, Element b);
Element negate(const GroupSpec& g, Element a);
Element subtract(const GroupSpec& g, Element a, Element b);

/// All elements in index order 0..N-1.
inline auto elements(const GroupSpec& g) {
    return std::views::iota(std::uint64_t{0}, g.order())
           | std::views::transform([](std::uint64_t i) { return Element{i}; });
}

}  // namespace subsum
