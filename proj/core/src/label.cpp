#include "branchtarget/label.hpp"

#include "branchtarget/errors.hpp"
#include "branchtarget/rng.hpp"

#include <charconv>

namespace bt {

Label Label::parse(std::string_view text) {
    if (text == "root") return Label{};
    if (text.empty()) throw InputError("label: empty text (root is spelled \"root\")");
    std::vector<std::uint32_t> digits;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t dot = text.find('.', pos);
        const std::string_view tok =
            text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        std::uint32_t value = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
            throw InputError("label: bad digit token '" + std::string(tok) + "' in '" +
                             std::string(text) + "'");
        digits.push_back(value);
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return Label{std::move(digits)};
}

Label Label::child(std::uint32_t k) const {
    std::vector<std::uint32_t> d = digits_;
    d.push_back(k);
    return Label{std::move(d)};
}

std::string Label::str() const {
    if (digits_.empty()) return "root";
    std::string out;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i) out.push_back('.');
        out += std::to_string(digits_[i]);
    }
    return out;
}

Label concat(const Label& a, const Label& b) {
    std::vector<std::uint32_t> d = a.digits();
    d.insert(d.end(), b.digits().begin(), b.digits().end());
    return Label{std::move(d)};
}

bool is_ancestor(const Label& ancestor, const Label& node, bool strict) {
    const auto& a = ancestor.digits();
    const auto& n = node.digits();
    if (a.size() > n.size()) return false;
    if (strict && a.size() == n.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != n[i]) return false;
    return true;
}

std::size_t common_prefix(const Label& a, const Label& b) {
    const auto& x = a.digits();
    const auto& y = b.digits();
    const std::size_t n = std::min(x.size(), y.size());
    std::size_t p = 0;
    while (p < n && x[p] == y[p]) ++p;
    return p;
}

std::uint64_t label_distance(const Label& a, const Label& b) {
    const std::size_t p = common_prefix(a, b);
    std::uint64_t d = 0;
    for (std::size_t i = p; i < a.digits().size(); ++i) d += a.digits()[i] + 1ull;
    for (std::size_t i = p; i < b.digits().size(); ++i) d += b.digits()[i] + 1ull;
    return d;
}

std::uint64_t label_norm(const Label& a) { return label_distance(a, Label::root()); }

std::uint64_t digit_sum(const Label& a) {
    std::uint64_t s = 0;
    for (const auto d : a.digits()) s += d;
    return s;
}

std::uint64_t label_hash(const Label& a) noexcept {
    std::uint64_t h = 0x8000000000000001ull;
    for (const auto d : a.digits()) h = mix64(h ^ (static_cast<std::uint64_t>(d) + 1));
    return h;
}

} // namespace bt
