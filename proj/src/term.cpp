// Copyright 2026 The pqdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include "pqdyn/term.hpp"

#include <algorithm>
#include <functional>

namespace pqdyn {

namespace mk {

namespace {
std::shared_ptr<Term> node(TermKind k, Span sp) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->span = std::move(sp);
  return t;
}
}  // namespace

TermPtr var(std::string name, Span sp) {
  auto t = node(TermKind::Var, std::move(sp));
  t->name = std::move(name);
  return t;
}
TermPtr label(LabelId l, Span sp) {
  auto t = node(TermKind::Label, std::move(sp));
  t->label = l;
  return t;
}
TermPtr lambda(std::string param, TermPtr body, Span sp) {
  auto t = node(TermKind::Lambda, std::move(sp));
  t->name = std::move(param);
  t->t1 = std::move(body);
  return t;
}
TermPtr app(TermPtr fn, TermPtr arg, Span sp) {
  auto t = node(TermKind::App, std::move(sp));
  t->t1 = std::move(fn);
  t->t2 = std::move(arg);
  return t;
}
TermPtr unit(Span sp) { return node(TermKind::UnitVal, std::move(sp)); }
TermPtr boolean(bool v, Span sp) {
  auto t = node(TermKind::BoolLit, std::move(sp));
  t->flag = v;
  return t;
}
TermPtr natlit(uint64_t n, Span sp) {
  auto t = node(TermKind::NatLit, std::move(sp));
  t->nat = n;
  return t;
}
TermPtr succ(TermPtr x, Span sp) {
  auto t = node(TermKind::Succ, std::move(sp));
  t->t1 = std::move(x);
  return t;
}
TermPtr lift(TermPtr x, Span sp) {
  auto t = node(TermKind::Lift, std::move(sp));
  t->t1 = std::move(x);
  return t;
}
TermPtr force(TermPtr x, Span sp) {
  auto t = node(TermKind::Force, std::move(sp));
  t->t1 = std::move(x);
  return t;
}
TermPtr box(TypePtr s, TermPtr x, Span sp) {
  auto t = node(TermKind::Box, std::move(sp));
  t->ty = std::move(s);
  t->t1 = std::move(x);
  return t;
}
TermPtr apply(TermPtr c, TermPtr arg, Span sp) {
  auto t = node(TermKind::Apply, std::move(sp));
  t->t1 = std::move(c);
  t->t2 = std::move(arg);
  return t;
}
TermPtr boxed_circ(std::shared_ptr<const BoxedCircuitValue> v, Span sp) {
  auto t = node(TermKind::BoxedCirc, std::move(sp));
  t->circ = std::move(v);
  return t;
}
TermPtr pair(TermPtr a, TermPtr b, Span sp) {
  auto t = node(TermKind::Pair, std::move(sp));
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}
TermPtr let_pair(std::string x, std::string y, TermPtr rhs, TermPtr body,
                 Span sp) {
  auto t = node(TermKind::LetPair, std::move(sp));
  t->name = std::move(x);
  t->name2 = std::move(y);
  t->t1 = std::move(rhs);
  t->t2 = std::move(body);
  return t;
}
TermPtr let_unit(TermPtr rhs, TermPtr body, Span sp) {
  auto t = node(TermKind::LetUnit, std::move(sp));
  t->t1 = std::move(rhs);
  t->t2 = std::move(body);
  return t;
}
TermPtr dynlift(TermPtr x, Span sp) {
  auto t = node(TermKind::Dynlift, std::move(sp));
  t->t1 = std::move(x);
  return t;
}
TermPtr if_then_else(TermPtr c, TermPtr th, TermPtr el, Span sp) {
  auto t = node(TermKind::If, std::move(sp));
  t->t1 = std::move(c);
  t->t2 = std::move(th);
  t->t3 = std::move(el);
  return t;
}
TermPtr nat_case(TermPtr scrut, TermPtr zero, std::string binder, TermPtr sc,
                 Span sp) {
  auto t = node(TermKind::NatCase, std::move(sp));
  t->t1 = std::move(scrut);
  t->t2 = std::move(zero);
  t->name = std::move(binder);
  t->t3 = std::move(sc);
  return t;
}
TermPtr nothing(Span sp) { return node(TermKind::NothingC, std::move(sp)); }
TermPtr just(TermPtr x, Span sp) {
  auto t = node(TermKind::JustC, std::move(sp));
  t->t1 = std::move(x);
  return t;
}
TermPtr maybe_case(TermPtr scrut, TermPtr none, std::string binder,
                   TermPtr some, Span sp) {
  auto t = node(TermKind::MaybeCase, std::move(sp));
  t->t1 = std::move(scrut);
  t->t2 = std::move(none);
  t->name = std::move(binder);
  t->t3 = std::move(some);
  return t;
}

}  // namespace mk

bool is_value(const TermPtr& t) {
  if (!t) return false;
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Label:
    case TermKind::Lambda:
    case TermKind::Lift:
    case TermKind::BoxedCirc:
    case TermKind::UnitVal:
    case TermKind::BoolLit:
    case TermKind::NatLit:
    case TermKind::NothingC:
      return true;
    case TermKind::JustC:
      return is_value(t->t1);
    case TermKind::Pair:
      return is_value(t->t1) && is_value(t->t2);
    default:
      return false;
  }
}

bool is_simple_term(const TermPtr& t) {
  if (!t) return false;
  switch (t->kind) {
    case TermKind::Label:
    case TermKind::UnitVal:
      return true;
    case TermKind::Pair:
      return is_simple_term(t->t1) && is_simple_term(t->t2);
    default:
      return false;
  }
}

std::vector<LabelId> simple_labels(const TermPtr& t) {
  std::vector<LabelId> out;
  std::function<void(const TermPtr&)> go = [&](const TermPtr& x) {
    if (!x) return;
    if (x->kind == TermKind::Label) out.push_back(x->label);
    else if (x->kind == TermKind::Pair) {
      go(x->t1);
      go(x->t2);
    }
  };
  go(t);
  return out;
}

void collect_labels(const TermPtr& t, std::set<LabelId>& out) {
  if (!t) return;
  if (t->kind == TermKind::Label) out.insert(t->label);
  if (t->kind == TermKind::BoxedCirc && t->circ) {
    // Boxed circuits are closed: their labels are scoped to the box.
    return;
  }
  collect_labels(t->t1, out);
  collect_labels(t->t2, out);
  collect_labels(t->t3, out);
}

namespace {

void free_vars_go(const TermPtr& t, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TermKind::Lambda: {
      bool fresh = bound.insert(t->name).second;
      free_vars_go(t->t1, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    case TermKind::LetPair: {
      free_vars_go(t->t1, bound, out);
      bool f1 = bound.insert(t->name).second;
      bool f2 = bound.insert(t->name2).second;
      free_vars_go(t->t2, bound, out);
      if (f2) bound.erase(t->name2);
      if (f1) bound.erase(t->name);
      return;
    }
    case TermKind::NatCase:
    case TermKind::MaybeCase: {
      free_vars_go(t->t1, bound, out);
      free_vars_go(t->t2, bound, out);
      bool fresh = bound.insert(t->name).second;
      free_vars_go(t->t3, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    default:
      free_vars_go(t->t1, bound, out);
      free_vars_go(t->t2, bound, out);
      free_vars_go(t->t3, bound, out);
      return;
  }
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  std::string candidate = base + "'";
  int i = 0;
  while (avoid.count(candidate)) candidate = base + "'" + std::to_string(i++);
  return candidate;
}

// Renames a binder occurrence inside `body` from `from` to `to`.
TermPtr rename(const TermPtr& body, const std::string& from,
               const std::string& to) {
  return substitute(body, from, mk::var(to));
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  free_vars_go(t, bound, out);
  return out;
}

TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& v) {
  if (!m) return m;
  switch (m->kind) {
    case TermKind::Var:
      return m->name == x ? v : m;
    case TermKind::Label:
    case TermKind::UnitVal:
    case TermKind::BoolLit:
    case TermKind::NatLit:
    case TermKind::NothingC:
    case TermKind::BoxedCirc:
      return m;
    case TermKind::Lambda: {
      if (m->name == x) return m;
      std::set<std::string> fv = free_vars(v);
      if (fv.count(m->name)) {
        std::set<std::string> avoid = fv;
        auto bodyfv = free_vars(m->t1);
        avoid.insert(bodyfv.begin(), bodyfv.end());
        std::string nn = fresh_name(m->name, avoid);
        TermPtr body = rename(m->t1, m->name, nn);
        return mk::lambda(nn, substitute(body, x, v), m->span);
      }
      return mk::lambda(m->name, substitute(m->t1, x, v), m->span);
    }
    case TermKind::LetPair: {
      TermPtr rhs = substitute(m->t1, x, v);
      if (m->name == x || m->name2 == x)
        return mk::let_pair(m->name, m->name2, rhs, m->t2, m->span);
      std::set<std::string> fv = free_vars(v);
      std::string n1 = m->name, n2 = m->name2;
      TermPtr body = m->t2;
      if (fv.count(n1)) {
        std::set<std::string> avoid = fv;
        auto bodyfv = free_vars(body);
        avoid.insert(bodyfv.begin(), bodyfv.end());
        avoid.insert(n2);
        std::string nn = fresh_name(n1, avoid);
        body = rename(body, n1, nn);
        n1 = nn;
      }
      if (fv.count(n2)) {
        std::set<std::string> avoid = fv;
        auto bodyfv = free_vars(body);
        avoid.insert(bodyfv.begin(), bodyfv.end());
        avoid.insert(n1);
        std::string nn = fresh_name(n2, avoid);
        body = rename(body, n2, nn);
        n2 = nn;
      }
      return mk::let_pair(n1, n2, rhs, substitute(body, x, v), m->span);
    }
    case TermKind::NatCase:
    case TermKind::MaybeCase: {
      TermPtr scrut = substitute(m->t1, x, v);
      TermPtr none = substitute(m->t2, x, v);
      std::string binder = m->name;
      TermPtr some = m->t3;
      if (binder != x) {
        std::set<std::string> fv = free_vars(v);
        if (fv.count(binder)) {
          std::set<std::string> avoid = fv;
          auto bodyfv = free_vars(some);
          avoid.insert(bodyfv.begin(), bodyfv.end());
          std::string nn = fresh_name(binder, avoid);
          some = rename(some, binder, nn);
          binder = nn;
        }
        some = substitute(some, x, v);
      }
      if (m->kind == TermKind::NatCase)
        return mk::nat_case(scrut, none, binder, some, m->span);
      return mk::maybe_case(scrut, none, binder, some, m->span);
    }
    default: {
      auto t = std::make_shared<Term>(*m);
      t->t1 = substitute(m->t1, x, v);
      t->t2 = substitute(m->t2, x, v);
      t->t3 = substitute(m->t3, x, v);
      return t;
    }
  }
}

TermPtr relabel_term(const TermPtr& t, const std::map<LabelId, LabelId>& map) {
  if (!t) return t;
  if (t->kind == TermKind::Label) {
    auto it = map.find(t->label);
    return it == map.end() ? t : mk::label(it->second, t->span);
  }
  if (t->kind == TermKind::BoxedCirc) return t;  // closed under relabeling
  if (!t->t1 && !t->t2 && !t->t3) return t;
  auto n = std::make_shared<Term>(*t);
  n->t1 = relabel_term(t->t1, map);
  n->t2 = relabel_term(t->t2, map);
  n->t3 = relabel_term(t->t3, map);
  return n;
}

namespace {

bool boxed_equal(const std::shared_ptr<const BoxedCircuitValue>& a,
                 const std::shared_ptr<const BoxedCircuitValue>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (!circuit_equal(a->circuit, b->circuit)) return false;
  // Interface shapes must match under the same canonical relabeling; compare
  // label positions within the interface enumerations.
  auto la = simple_labels(a->input_shape);
  auto lb = simple_labels(b->input_shape);
  auto oa = simple_labels(a->output_shape);
  auto ob = simple_labels(b->output_shape);
  if (la.size() != lb.size() || oa.size() != ob.size()) return false;
  return true;
}

bool alpha_go(const TermPtr& x, const TermPtr& y,
              std::vector<std::pair<std::string, std::string>>& env) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  auto lookup = [&](const std::string& n, bool left) -> int {
    for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i) {
      const auto& [a, b] = env[i];
      if (left ? a == n : b == n) return i;
    }
    return -1;
  };
  switch (x->kind) {
    case TermKind::Var: {
      int ix = lookup(x->name, true);
      int iy = lookup(y->name, false);
      if (ix != iy) return false;
      if (ix == -1) return x->name == y->name;  // free: must match exactly
      return env[ix].first == x->name && env[ix].second == y->name;
    }
    case TermKind::Label:
      return x->label == y->label;
    case TermKind::UnitVal:
    case TermKind::NothingC:
      return true;
    case TermKind::BoolLit:
      return x->flag == y->flag;
    case TermKind::NatLit:
      return x->nat == y->nat;
    case TermKind::BoxedCirc:
      return boxed_equal(x->circ, y->circ);
    case TermKind::Lambda: {
      env.push_back({x->name, y->name});
      bool ok = alpha_go(x->t1, y->t1, env);
      env.pop_back();
      return ok;
    }
    case TermKind::LetPair: {
      if (!alpha_go(x->t1, y->t1, env)) return false;
      env.push_back({x->name, y->name});
      env.push_back({x->name2, y->name2});
      bool ok = alpha_go(x->t2, y->t2, env);
      env.pop_back();
      env.pop_back();
      return ok;
    }
    case TermKind::NatCase:
    case TermKind::MaybeCase: {
      if (!alpha_go(x->t1, y->t1, env)) return false;
      if (!alpha_go(x->t2, y->t2, env)) return false;
      env.push_back({x->name, y->name});
      bool ok = alpha_go(x->t3, y->t3, env);
      env.pop_back();
      return ok;
    }
    case TermKind::Box:
      if (!type_equal(x->ty, y->ty, nullptr)) return false;
      return alpha_go(x->t1, y->t1, env);
    default:
      if ((x->t1 == nullptr) != (y->t1 == nullptr)) return false;
      if ((x->t2 == nullptr) != (y->t2 == nullptr)) return false;
      if ((x->t3 == nullptr) != (y->t3 == nullptr)) return false;
      if (x->t1 && !alpha_go(x->t1, y->t1, env)) return false;
      if (x->t2 && !alpha_go(x->t2, y->t2, env)) return false;
      if (x->t3 && !alpha_go(x->t3, y->t3, env)) return false;
      return true;
  }
}

}  // namespace

bool alpha_equal(const TermPtr& x, const TermPtr& y) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_go(x, y, env);
}

bool term_equal(const TermPtr& x, const TermPtr& y) {
  return alpha_equal(x, y);
}

}  // namespace pqdyn
