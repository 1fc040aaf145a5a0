#include "mspe/generate.hpp"

#include <random>
#include <stdexcept>

namespace mspe {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  // Uniform enough for corpus generation; modulo bias is irrelevant here.
  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Ppda generate_ppda(const GenerateOptions& options) {
  if (options.n_states == 0 || options.n_symbols == 0 || options.max_rules == 0) {
    throw std::invalid_argument("generate: states, symbols and max_rules must be positive");
  }
  Draw draw(options.seed);
  std::vector<std::string> states;
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < options.n_states; ++i) states.push_back("q" + std::to_string(i));
  for (std::size_t i = 0; i < options.n_symbols; ++i) symbols.push_back("S" + std::to_string(i));

  std::vector<PpdaRule> rules;
  for (const auto& p : states) {
    for (const auto& x : symbols) {
      struct Shape {
        std::string target;
        std::vector<std::string> push;
        long weight;
      };
      std::vector<Shape> shapes;
      if (options.strict) {
        for (const auto& q : states) shapes.push_back({q, {}, static_cast<long>(draw.between(1, 9))});
      } else {
        shapes.push_back({states[draw.below(states.size())], {}, static_cast<long>(draw.between(1, 9))});
      }
      const std::size_t extra = draw.between(1, options.max_rules);
      for (std::size_t r = 0; r < extra; ++r) {
        Shape s{states[draw.below(states.size())], {}, static_cast<long>(draw.between(1, 9))};
        const std::size_t len = draw.between(1, 2);
        for (std::size_t k = 0; k < len; ++k) s.push.push_back(symbols[draw.below(symbols.size())]);
        // Merge with an identical right-hand side so the rule list stays canonical.
        bool merged = false;
        for (auto& t : shapes) {
          if (t.target == s.target && t.push == s.push) {
            t.weight += s.weight;
            merged = true;
            break;
          }
        }
        if (!merged) shapes.push_back(std::move(s));
      }
      long total = 0;
      for (const auto& s : shapes) total += s.weight;
      for (auto& s : shapes) rules.push_back({p, x, Rational(Integer(s.weight), Integer(total)), s.target, std::move(s.push)});
    }
  }
  for (auto& r : rules) r.probability.canonicalize();
  return Ppda(std::move(rules));
}

}  // namespace mspe
