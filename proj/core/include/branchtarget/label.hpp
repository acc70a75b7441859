#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bt {

// Genealogy coordinate of a particle: a finite word of child indices.  The
// empty word is the root.  Text form joins digits with '.', the root is
// spelled "root" (e.g. "1.0.3").
class Label {
  public:
    Label() = default;
    explicit Label(std::vector<std::uint32_t> digits) : digits_(std::move(digits)) {}

    static Label root() { return Label{}; }

    // throws InputError on malformed text
    static Label parse(std::string_view text);

    const std::vector<std::uint32_t>& digits() const { return digits_; }
    std::size_t generation() const { return digits_.size(); }
    bool is_root() const { return digits_.empty(); }

    Label child(std::uint32_t k) const;
    std::string str() const;

    bool operator==(const Label&) const = default;

    // lexicographic order on digit words; a proper prefix sorts first
    std::strong_ordering operator<=>(const Label& other) const {
        const std::size_t n = std::min(digits_.size(), other.digits_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (auto c = digits_[i] <=> other.digits_[i]; c != 0) return c;
        }
        return digits_.size() <=> other.digits_.size();
    }

  private:
    std::vector<std::uint32_t> digits_;
};

// word concatenation; associative with root as identity
Label concat(const Label& a, const Label& b);

// true when `ancestor` is a prefix of `node` (strict: proper prefix)
bool is_ancestor(const Label& ancestor, const Label& node, bool strict = false);

// length of the longest common prefix
std::size_t common_prefix(const Label& a, const Label& b);

// genealogical distance: sum of (digit+1) over both words past the common
// prefix.  A metric on label words.
std::uint64_t label_distance(const Label& a, const Label& b);

// distance to the root: sum of (digit+1)
std::uint64_t label_norm(const Label& a);

// plain digit sum (used e.g. for strike laddering); distinct from label_norm
std::uint64_t digit_sum(const Label& a);

// stable 64-bit hash for RNG substreams; root hashes to a fixed constant
std::uint64_t label_hash(const Label& a) noexcept;

} // namespace bt
