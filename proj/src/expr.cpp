#include "bft/expr.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace bft {

namespace {

struct Parser {
  const Frame& frame;
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void err(const std::string& what) const {
    fail(errc::syntax_error, what + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  bool eat_or() { return eat("|") || eat("∪"); }
  bool eat_and() { return eat("&") || eat("∩"); }
  bool eat_not() { return eat("!") || eat("τ"); }

  SetMask parse_or() {
    SetMask m = parse_and();
    while (eat_or()) m = m | parse_and();
    return m;
  }

  SetMask parse_and() {
    SetMask m = parse_unary();
    while (eat_and()) m = m & parse_unary();
    return m;
  }

  SetMask parse_unary() {
    if (eat_not()) return frame.complement(parse_unary());
    return parse_primary();
  }

  SetMask parse_primary() {
    skip_ws();
    if (eat("(")) {
      SetMask m = parse_or();
      if (!eat(")")) err("expected ')'");
      return m;
    }
    const std::size_t start = pos;
    if (pos < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                   text[pos] == '_'))
        ++pos;
      const std::string_view name = text.substr(start, pos - start);
      if (name == "EMPTY") return frame.empty_set();
      if (auto i = frame.index_of(name)) return frame.singleton(*i);
      fail(errc::unknown_label, "unknown label '" + std::string(name) + "'");
    }
    err("expected a label, 'EMPTY', '!' or '('");
  }

  SetMask parse() {
    SetMask m = parse_or();
    skip_ws();
    if (pos != text.size()) err("unexpected trailing input");
    return m;
  }
};

// A product of literals over the frame's singletons: pos bits demand
// membership, neg bits demand non-membership.
struct Product {
  unsigned pos = 0;
  unsigned neg = 0;
  int literals = 0;
  mask_bits coverage = 0;
};

mask_bits product_coverage(unsigned n, unsigned pos, unsigned neg) {
  mask_bits c = 0;
  for (unsigned p = 1; p < (1u << n); ++p)
    if ((p & pos) == pos && (p & neg) == 0) c |= mask_bits{1} << (p - 1);
  return c;
}

// Prime implicants of `m`: products covering only regions of m from which
// no literal can be dropped.
std::vector<Product> prime_implicants(unsigned n, mask_bits m) {
  std::vector<Product> primes;
  for (unsigned pos = 0; pos < (1u << n); ++pos) {
    for (unsigned neg = 0; neg < (1u << n); ++neg) {
      if (pos & neg) continue;
      if (pos == 0 && neg == 0) continue;
      const mask_bits cov = product_coverage(n, pos, neg);
      if (cov == 0 || (cov & ~m) != 0) continue;
      bool prime = true;
      for (unsigned i = 0; i < n && prime; ++i) {
        const unsigned bit = 1u << i;
        if ((pos & bit) && (product_coverage(n, pos ^ bit, neg) & ~m) == 0) prime = false;
        if ((neg & bit) && (product_coverage(n, pos, neg ^ bit) & ~m) == 0) prime = false;
      }
      if (prime)
        primes.push_back(Product{pos, neg, std::popcount(pos) + std::popcount(neg), cov});
    }
  }
  std::sort(primes.begin(), primes.end(), [](const Product& a, const Product& b) {
    if (a.literals != b.literals) return a.literals < b.literals;
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.neg < b.neg;
  });
  return primes;
}

struct CoverSearch {
  const std::vector<Product>& primes;
  mask_bits want;
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;
  int best_count = 1 << 20;
  int best_literals = 1 << 20;
  long nodes = 0;
  static constexpr long node_budget = 200'000;

  void run(mask_bits uncovered, int literals) {
    if (++nodes > node_budget) return;
    if (uncovered == 0) {
      const int count = static_cast<int>(chosen.size());
      if (count < best_count || (count == best_count && literals < best_literals)) {
        best_count = count;
        best_literals = literals;
        best = chosen;
      }
      return;
    }
    if (static_cast<int>(chosen.size()) + 1 > best_count) return;
    // branch on the lowest uncovered region
    const mask_bits region = uncovered & (~uncovered + 1);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (!(primes[i].coverage & region)) continue;
      chosen.push_back(i);
      run(uncovered & ~primes[i].coverage, literals + primes[i].literals);
      chosen.pop_back();
    }
  }
};

std::string render_product(const Frame& frame, unsigned pos, unsigned neg) {
  std::string out;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const unsigned bit = 1u << i;
    if (!(pos & bit) && !(neg & bit)) continue;
    if (!out.empty()) out += " & ";
    if (neg & bit) out += '!';
    out += frame.label(i);
  }
  return out;
}

}  // namespace

SetMask parse_set_expression(const Frame& frame, std::string_view text) {
  Parser p{frame, text};
  return p.parse();
}

std::string render_element(const Frame& frame, const SetMask& m) {
  frame.check_owns(m);
  if (m.is_void()) return "EMPTY";
  const auto n = static_cast<unsigned>(frame.size());
  if (m.is_full()) {
    std::string out = frame.label(0);
    for (std::size_t i = 1; i < frame.size(); ++i) out += " | " + frame.label(i);
    return out;
  }

  const std::vector<Product> primes = prime_implicants(n, m.bits());
  CoverSearch search{primes, m.bits()};
  search.run(m.bits(), 0);

  std::vector<Product> cover;
  if (!search.best.empty()) {
    for (std::size_t i : search.best) cover.push_back(primes[i]);
  } else {
    // budget exhausted: fall back to one full product per region
    for (unsigned p = 1; p <= frame.region_count(); ++p) {
      if (!(m.bits() & (mask_bits{1} << (p - 1)))) continue;
      const unsigned pos = p;
      const unsigned neg = ~p & ((1u << n) - 1u);
      cover.push_back(Product{pos, neg, static_cast<int>(n), mask_bits{1} << (p - 1)});
    }
  }
  std::sort(cover.begin(), cover.end(),
            [](const Product& a, const Product& b) { return a.coverage < b.coverage; });

  std::string out;
  for (const auto& prod : cover) {
    if (!out.empty()) out += " | ";
    out += render_product(frame, prod.pos, prod.neg);
  }
  return out;
}

std::string to_hex(const SetMask& m) {
  const unsigned digits = (m.region_count() + 3) / 4;
  std::string out(digits, '0');
  static const char* hex = "0123456789abcdef";
  mask_bits bits = m.bits();
  for (unsigned i = 0; i < digits; ++i, bits >>= 4) out[digits - 1 - i] = hex[bits & 0xf];
  return out;
}

SetMask from_hex(const Frame& frame, std::string_view hex) {
  if (hex.empty()) fail(errc::syntax_error, "empty hex mask");
  mask_bits bits = 0;
  for (char c : hex) {
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else
      fail(errc::syntax_error, "invalid hex digit in mask");
    if (bits >> 60) fail(errc::syntax_error, "hex mask too wide");
    bits = bits << 4 | static_cast<mask_bits>(d);
  }
  return frame.element(bits);  // rejects bits beyond the region count
}

}  // namespace bft
