#include "fop/smtlib.hpp"

#include <cctype>
#include <sstream>

namespace fop {

std::string smt_symbol(std::string_view name) {
  static const std::string_view extra = "~!@$%^&*_-+=<>.?/";
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name.front()));
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string_view::npos) simple = false;
  if (simple) return std::string(name);
  return "|" + std::string(name) + "|";
}

std::string smt_element_name(const Sort& s, int i) { return smt_symbol(s.name() + "#" + std::to_string(i)); }

namespace {

void emit_term(const Term& t, std::string& out) {
  if (t.is_var()) {
    out += smt_symbol(t.var_name());
    return;
  }
  if (t.args().empty()) {
    out += smt_symbol(t.symbol().full_name());
    return;
  }
  out += '(';
  out += smt_symbol(t.symbol().full_name());
  for (const auto& a : t.args()) {
    out += ' ';
    emit_term(a, out);
  }
  out += ')';
}

void emit_formula(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  auto nary = [&](const char* op, const char* empty) {
    const auto& kids = f.children();
    if (kids.empty()) {
      out += empty;
      return;
    }
    if (kids.size() == 1) {
      emit_formula(kids.front(), out);
      return;
    }
    out += '(';
    out += op;
    for (const auto& k : kids) {
      out += ' ';
      emit_formula(k, out);
    }
    out += ')';
  };
  switch (f.kind()) {
    case K::kTrue: out += "true"; return;
    case K::kFalse: out += "false"; return;
    case K::kAtom:
      if (f.terms().empty()) {
        out += smt_symbol(f.predicate().full_name());
        return;
      }
      out += '(';
      out += smt_symbol(f.predicate().full_name());
      for (const auto& a : f.terms()) {
        out += ' ';
        emit_term(a, out);
      }
      out += ')';
      return;
    case K::kEq:
      out += "(= ";
      emit_term(f.terms()[0], out);
      out += ' ';
      emit_term(f.terms()[1], out);
      out += ')';
      return;
    case K::kNot:
      out += "(not ";
      emit_formula(f.body(), out);
      out += ')';
      return;
    case K::kAnd: nary("and", "true"); return;
    case K::kOr: nary("or", "false"); return;
    case K::kImplies:
    case K::kIff:
      out += f.is(K::kImplies) ? "(=> " : "(= ";
      emit_formula(f.children()[0], out);
      out += ' ';
      emit_formula(f.children()[1], out);
      out += ')';
      return;
    case K::kForall:
    case K::kExists:
      out += f.is(K::kForall) ? "(forall (" : "(exists (";
      for (std::size_t i = 0; i < f.bound().size(); ++i) {
        if (i) out += ' ';
        out += '(' + smt_symbol(f.bound()[i].name) + ' ' + smt_symbol(f.bound()[i].sort.name()) + ')';
      }
      out += ") ";
      emit_formula(f.body(), out);
      out += ')';
      return;
  }
}

void declare(const Symbol& s, std::ostringstream& out) {
  out << "(declare-fun " << smt_symbol(s.full_name()) << " (";
  for (std::size_t i = 0; i < s.arg_sorts().size(); ++i)
    out << (i ? " " : "") << smt_symbol(s.arg_sorts()[i].name());
  out << ") " << (s.is_predicate() ? "Bool" : smt_symbol(s.result_sort().name())) << ")\n";
}

}  // namespace

std::string smt_term(const Term& t) {
  std::string out;
  emit_term(t, out);
  return out;
}

std::string smt_formula(const Formula& f) {
  std::string out;
  emit_formula(f, out);
  return out;
}

std::string smt_declarations(const Signature& sig, const EmissionOptions& opts) {
  std::ostringstream out;
  for (const auto& s : sig.sorts()) out << "(declare-sort " << smt_symbol(s.name()) << " 0)\n";
  if (opts.cardinality_bound) {
    const Sort proc = Sort::proc();
    const int n = *opts.cardinality_bound;
    for (int i = 0; i < n; ++i) out << "(declare-fun " << smt_element_name(proc, i) << " () Proc)\n";
    out << "(assert (forall ((|x#card| Proc)) (or";
    for (int i = 0; i < n; ++i) out << " (= |x#card| " << smt_element_name(proc, i) << ")";
    if (n == 1) out << " false";
    out << ")))\n";
  }
  for (const auto& s : sig.symbols()) {
    declare(s, out);
    if (auto p = sig.primed_of(s)) declare(*p, out);
  }
  return out.str();
}

std::string to_smtlib(const std::vector<Formula>& assertions, const Signature& sig,
                      const EmissionOptions& opts) {
  std::ostringstream out;
  if (opts.preamble) {
    out << "(set-option :produce-models true)\n";
    out << "(set-logic " << opts.logic << ")\n";
    out << smt_declarations(sig, opts);
  }
  for (const auto& f : assertions) out << "(assert " << smt_formula(f) << ")\n";
  return out.str();
}

std::string to_smtlib(const Formula& f, const Signature& sig, const EmissionOptions& opts) {
  return to_smtlib(std::vector<Formula>{f}, sig, opts);
}

}  // namespace fop
