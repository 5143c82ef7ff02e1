#include "kvlog/gen.hpp"

namespace kvlog {

namespace {

class Generator {
 public:
  Generator(Rng& rng, const Vocabulary& v, Language lang) : rng_(rng), v_(v), lang_(lang) {}

  Formula make(std::size_t modal, std::size_t height) {
    if (height == 0 || rng_.coin(0.25)) return leaf();
    // 0: neg, 1: and, 2+: modal
    std::size_t choices = modal > 0 ? 4 : 2;
    switch (rng_.below(choices)) {
      case 0: return neg(make(modal, height - 1));
      case 1: return conj(make(modal, height - 1), make(modal, height - 1));
      case 2: return box(agent(), make(modal - 1, height - 1));
      default: return special(modal - 1, height - 1);
    }
  }

 private:
  Formula leaf() {
    if (rng_.coin(0.15)) return top();
    return prop(pick(v_.props()));
  }
  const std::string& agent() { return pick(v_.agents()); }
  const std::string& constant() { return pick(v_.constants()); }
  const std::string& pick(const std::vector<std::string>& xs) { return xs[rng_.below(xs.size())]; }

  Formula special(std::size_t modal, std::size_t height) {
    const std::string& a = agent();
    const std::string& c = constant();
    switch (lang_) {
      case Language::ELKvR: return kv(a, make(modal, height), c);
      case Language::MLKvR: return kbox(a, c, make(modal, height));
      case Language::MLKvB: return kbox(a, c, make(modal, height), make(modal, height));
      case Language::MLKv: return kbox(a, c, bottom());
    }
    return top();
  }

  Rng& rng_;
  const Vocabulary& v_;
  Language lang_;
};

}  // namespace

Formula random_formula(Rng& rng, const Vocabulary& vocab, Language lang, FormulaShape shape) {
  return Generator(rng, vocab, lang).make(shape.modal_depth, shape.height);
}

}  // namespace kvlog
