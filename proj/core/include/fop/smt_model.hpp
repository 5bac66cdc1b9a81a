// Structured reading of solver models for re-evaluation.

#ifndef FOP_SMT_MODEL_HPP
#define FOP_SMT_MODEL_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fop/eval.hpp"
#include "fop/fol.hpp"
#include "fop/sexpr.hpp"

namespace fop {

// A finite model read from a (get-model) response. Universes are the
// solver's element constants per sort; symbols are interpreted by
// evaluating their define-fun bodies.
class ModelStructure : public Structure {
 public:
  // Throws ParseError when the text is not a model.
  static ModelStructure parse(std::string_view model_text, const Signature& sig);

  int domain_size(const Sort& s) const override;
  int apply(const Symbol& f, std::span<const int> args) const override;

  const std::vector<std::string>& universe(const Sort& s) const;
  // Symbols the model interprets, by printed name.
  std::vector<std::string> defined_symbols() const;
  // Deterministic ground tables of every signature symbol over the universes.
  SExpr to_sexpr(const Signature& sig) const;

 private:
  struct Definition {
    std::vector<std::string> params;
    std::vector<std::string> param_sorts;
    std::string result_sort;
    SExpr body;
  };

  std::string eval(const SExpr& e, std::map<std::string, std::string>& env, int depth) const;
  std::string call(const std::string& name, const std::vector<std::string>& args, int depth) const;
  std::string element(const std::string& sort, int i) const;
  int index_of(const std::string& sort, const std::string& element) const;

  std::map<std::string, std::vector<std::string>> universes_;
  std::map<std::string, Definition> defs_;
};

}  // namespace fop

#endif  // FOP_SMT_MODEL_HPP
