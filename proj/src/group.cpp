#include "subsum/group.hpp"

#include <charconv>

#include "subsum/errors.hpp"
#include "subsum/numeric.hpp"

namespace subsum {

GroupSpec::GroupSpec(std::vector<std::uint64_t> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw DomainError("group needs at least one factor");
    strides_.reserve(factors_.size());
    for (auto n : factors_) {
        if (n < 2) throw DomainError("group factor " + std::to_string(n) + " is below 2");
        strides_.push_back(order_);
        if (order_ > UINT64_MAX / n) throw CapacityError("group order overflows 64 bits");
        order_ *= n;
    }
}

GroupSpec GroupSpec::parse(std::string_view text) {
    std::vector<std::uint64_t> factors;
    while (true) {
        auto comma = text.find(',');
        auto tok = text.substr(0, comma);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            throw DomainError("bad group factor '" + std::string(tok) + "'");
        factors.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return GroupSpec(std::move(factors));
}

bool GroupSpec::is_prime_cyclic() const { return is_cyclic() && is_prime(order_); }

std::string GroupSpec::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(factors_[i]);
    }
    return s;
}

void check_element(const GroupSpec& g, Element x) {
    if (x.index >= g.order())
        throw ContractError("element index " + std::to_string(x.index) + " outside group of order "
                            + std::to_string(g.order()));
}

std::vector<std::uint64_t> decode(const GroupSpec& g, Element x) {
    check_element(g, x);
    std::vector<std::uint64_t> digits;
    digits.reserve(g.rank());
    auto rest = x.index;
    for (auto n : g.factors()) {
        digits.push_back(rest % n);
        rest /= n;
    }
    return digits;
}

Element encode(const GroupSpec& g, std::span<const std::uint64_t> digits) {
    if (digits.size() != g.rank()) throw ContractError("digit count does not match group rank");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] >= g.factors()[i]) throw ContractError("digit out of range");
        idx += digits[i] * g.stride(i);
    }
    return Element{idx};
}

Element add(const GroupSpec& g, Element a, Element b) {
    check_element(g, a);
    check_element(g, b);
    if (g.is_cyclic()) {
        auto n = g.order();
        auto s = a.index + b.index;  // both < n <= 2^64-1; guard wrap
        if (s < a.index || s >= n) s -= n;
        return Element{s};
    }
    std::uint64_t out = 0, ra = a.index, rb = b.index;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        auto n = g.factors()[i];
        auto d = ra % n + rb % n;
        if (d >= n) d -= n;
        out += d * g.stride(i);
        ra /= n;
        rb /= n;
    }
    return Element{out};
}

Element negate(const GroupSpec& g, Element a) {
    check_element(g, a);
    std::uint64_t out = 0, ra = a.index;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        auto n = g.factors()[i];
        auto d = ra % n;
        out += (d == 0 ? 0 : n - d) * g.stride(i);
        ra /= n;
    }
    return Element{out};
}

Element subtract(const GroupSpec& g, Element a, Element b) { return add(g, a, negate(g, b)); }

}  // namespace subsum
