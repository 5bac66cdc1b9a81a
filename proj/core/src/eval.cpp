#include "fop/eval.hpp"

#include <stdexcept>

#include "fop/error.hpp"

namespace fop {

struct CompiledFormula::Node {
  enum class Op { kTrue, kFalse, kVar, kApp, kAtom, kEq, kNot, kAnd, kOr, kImplies, kIff, kForall, kExists };
  explicit Node(Op o) : op(o) {}
  Op op;
  int slot = -1;          // kVar
  Symbol sym;             // kApp, kAtom
  std::vector<int> kids;  // argument / child node indices
  std::vector<int> bound_slots;
  std::vector<Sort> bound_sorts;
};

namespace {

using Node = CompiledFormula::Node;
using Op = Node::Op;

class Compiler {
 public:
  explicit Compiler(const std::vector<Var>& free_order) {
    for (const auto& v : free_order) scope_.push_back({v, slots_++});
  }

  int term(const Term& t) {
    if (t.is_var()) {
      Node n{Op::kVar};
      n.slot = lookup(t.as_var());
      return push(std::move(n));
    }
    Node n{Op::kApp};
    n.sym = t.symbol();
    for (const auto& a : t.args()) n.kids.push_back(term(a));
    return push(std::move(n));
  }

  int formula(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::kTrue: return push(Node{Op::kTrue});
      case K::kFalse: return push(Node{Op::kFalse});
      case K::kAtom: {
        Node n{Op::kAtom};
        n.sym = f.predicate();
        for (const auto& a : f.terms()) n.kids.push_back(term(a));
        return push(std::move(n));
      }
      case K::kEq: {
        Node n{Op::kEq};
        n.kids = {term(f.terms()[0]), term(f.terms()[1])};
        return push(std::move(n));
      }
      case K::kForall:
      case K::kExists: {
        Node n{f.is(K::kForall) ? Op::kForall : Op::kExists};
        const std::size_t depth = scope_.size();
        for (const auto& v : f.bound()) {
          n.bound_slots.push_back(slots_);
          n.bound_sorts.push_back(v.sort);
          scope_.push_back({v, slots_++});
        }
        n.kids = {formula(f.body())};
        scope_.resize(depth);
        return push(std::move(n));
      }
      default: {
        static const Op ops[] = {Op::kTrue, Op::kFalse, Op::kAtom, Op::kEq, Op::kNot, Op::kAnd, Op::kOr,
                                 Op::kImplies, Op::kIff};
        Node n{ops[static_cast<int>(f.kind())]};
        for (const auto& k : f.children()) n.kids.push_back(formula(k));
        return push(std::move(n));
      }
    }
  }

  std::vector<Node> nodes;
  int slots_ = 0;

 private:
  int lookup(const Var& v) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first.name == v.name) return it->second;
    throw Error("unbound variable '" + v.name + "' during evaluation");
  }

  int push(Node n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  std::vector<std::pair<Var, int>> scope_;
};

class Machine {
 public:
  Machine(const std::vector<Node>& nodes, const Structure& s, std::span<int> env)
      : nodes_(nodes), s_(s), env_(env) {}

  int term(int i) {
    const Node& n = nodes_[i];
    if (n.op == Op::kVar) return env_[n.slot];
    int buf[8];
    std::vector<int> big;
    int* args = buf;
    if (n.kids.size() > 8) {
      big.resize(n.kids.size());
      args = big.data();
    }
    for (std::size_t k = 0; k < n.kids.size(); ++k) {
      args[k] = term(n.kids[k]);
      if (args[k] < 0) return -1;
    }
    return s_.apply(n.sym, std::span<const int>(args, n.kids.size()));
  }

  Truth formula(int i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::kTrue: return Truth::kTrue;
      case Op::kFalse: return Truth::kFalse;
      case Op::kAtom: {
        int buf[8];
        std::vector<int> big;
        int* args = buf;
        if (n.kids.size() > 8) {
          big.resize(n.kids.size());
          args = big.data();
        }
        for (std::size_t k = 0; k < n.kids.size(); ++k) {
          args[k] = term(n.kids[k]);
          if (args[k] < 0) return Truth::kUnknown;
        }
        int v = s_.apply(n.sym, std::span<const int>(args, n.kids.size()));
        return v < 0 ? Truth::kUnknown : to_truth(v != 0);
      }
      case Op::kEq: {
        int a = term(n.kids[0]);
        if (a < 0) return Truth::kUnknown;
        int b = term(n.kids[1]);
        if (b < 0) return Truth::kUnknown;
        return to_truth(a == b);
      }
      case Op::kNot: return negate(formula(n.kids[0]));
      case Op::kAnd: {
        Truth acc = Truth::kTrue;
        for (int k : n.kids) {
          Truth t = formula(k);
          if (t == Truth::kFalse) return t;
          if (t == Truth::kUnknown) acc = t;
        }
        return acc;
      }
      case Op::kOr: {
        Truth acc = Truth::kFalse;
        for (int k : n.kids) {
          Truth t = formula(k);
          if (t == Truth::kTrue) return t;
          if (t == Truth::kUnknown) acc = t;
        }
        return acc;
      }
      case Op::kImplies: {
        Truth a = formula(n.kids[0]);
        if (a == Truth::kFalse) return Truth::kTrue;
        Truth b = formula(n.kids[1]);
        if (b == Truth::kTrue) return b;
        return a == Truth::kTrue ? b : Truth::kUnknown;
      }
      case Op::kIff: {
        Truth a = formula(n.kids[0]);
        if (a == Truth::kUnknown) return a;
        Truth b = formula(n.kids[1]);
        if (b == Truth::kUnknown) return b;
        return to_truth(a == b);
      }
      case Op::kForall:
      case Op::kExists: return quantifier(n, 0);
      default: return Truth::kUnknown;
    }
  }

 private:
  static Truth negate(Truth t) {
    if (t == Truth::kTrue) return Truth::kFalse;
    if (t == Truth::kFalse) return Truth::kTrue;
    return t;
  }

  Truth quantifier(const Node& n, std::size_t level) {
    if (level == n.bound_slots.size()) return formula(n.kids[0]);
    const bool universal = n.op == Op::kForall;
    const Truth stop = universal ? Truth::kFalse : Truth::kTrue;
    Truth acc = universal ? Truth::kTrue : Truth::kFalse;
    const int size = s_.domain_size(n.bound_sorts[level]);
    const int slot = n.bound_slots[level];
    for (int v = 0; v < size; ++v) {
      env_[slot] = v;
      Truth t = quantifier(n, level + 1);
      if (t == stop) return t;
      if (t == Truth::kUnknown) acc = t;
    }
    return acc;
  }

  const std::vector<Node>& nodes_;
  const Structure& s_;
  std::span<int> env_;
};

}  // namespace

CompiledFormula CompiledFormula::compile(const Formula& f, const std::vector<Var>& free_order) {
  Compiler c(free_order);
  CompiledFormula out;
  out.root_ = c.formula(f);
  out.free_count_ = free_order.size();
  out.slot_count_ = static_cast<std::size_t>(c.slots_);
  out.nodes_ = std::make_shared<const std::vector<Node>>(std::move(c.nodes));
  return out;
}

Truth CompiledFormula::eval(const Structure& s, std::span<const int> free_values) const {
  if (free_values.size() != free_count_) throw std::invalid_argument("wrong number of free values");
  int buf[32];
  std::vector<int> big;
  std::span<int> env(buf, slot_count_ <= 32 ? slot_count_ : 0);
  if (slot_count_ > 32) {
    big.resize(slot_count_);
    env = big;
  }
  std::fill(env.begin(), env.end(), -1);
  std::copy(free_values.begin(), free_values.end(), env.begin());
  Machine m(*nodes_, s, env);
  return m.formula(root_);
}

namespace {

std::vector<Var> order_of(const std::set<Var>& vars, const std::map<std::string, int>& env,
                          std::vector<int>& values) {
  std::vector<Var> order;
  for (const auto& v : vars) {
    auto it = env.find(v.name);
    if (it == env.end()) throw Error("free variable '" + v.name + "' has no value");
    order.push_back(v);
    values.push_back(it->second);
  }
  return order;
}

}  // namespace

Truth evaluate(const Formula& f, const Structure& s, const std::map<std::string, int>& env) {
  std::vector<int> values;
  auto order = order_of(free_vars(f), env, values);
  return CompiledFormula::compile(f, order).eval(s, values);
}

int evaluate(const Term& t, const Structure& s, const std::map<std::string, int>& env) {
  std::vector<int> values;
  auto order = order_of(free_vars(t), env, values);
  Compiler c(order);
  int root = c.term(t);
  std::vector<int> slots(static_cast<std::size_t>(c.slots_), -1);
  std::copy(values.begin(), values.end(), slots.begin());
  Machine m(c.nodes, s, slots);
  return m.term(root);
}

}  // namespace fop
