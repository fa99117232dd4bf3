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

#include "pqdyn/eval.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "pqdyn/pretty.hpp"

namespace pqdyn {

namespace {

[[noreturn]] void stuck(const Term& t, const std::string& why) {
  throw Error(ErrKind::StuckTerm, t.span,
              "evaluation got stuck: " + why + " (at '" +
                  pretty_term(std::make_shared<Term>(t)) + "')");
}

}  // namespace

// One self-recursive unfolding budget check. Non-recursive declarations
// resolve freely; a recursive one charges the per-path counter and prunes
// once the budget is spent.
TermPtr Evaluator::resolve_name(const Term& t, std::map<std::string, int>* uses,
                                const EvalLimits* limits, bool* pruned) {
  const Declaration* d = env_.find(t.name);
  if (!d) {
    throw Error(ErrKind::UnboundVariable, t.span,
                "unbound name '" + t.name + "' during evaluation");
  }
  if (d->recursive && uses && limits) {
    int& n = (*uses)[t.name];
    if (n >= limits->max_depth) {
      if (pruned) *pruned = true;
      return nullptr;
    }
    ++n;
  }
  return d->value;
}

//==============================================================================
// Circuit generation
//==============================================================================

GenResult Evaluator::eval_gen(const Circuit& c, const TermPtr& m) {
  if (is_value(m)) return {c, m};
  const Term& t = *m;
  switch (t.kind) {
    case TermKind::App: {
      GenResult fn = eval_gen(c, t.t1);
      GenResult arg = eval_gen(fn.circuit, t.t2);
      TermPtr f = fn.value;
      while (f->kind == TermKind::Var) {
        f = resolve_name(*f, nullptr, nullptr, nullptr);
      }
      if (f->kind != TermKind::Lambda) stuck(t, "expected a function value");
      return eval_gen(arg.circuit, substitute(f->t1, f->name, arg.value));
    }

    case TermKind::Force: {
      GenResult g = eval_gen(c, t.t1);
      TermPtr v = g.value;
      while (v->kind == TermKind::Var) {
        v = resolve_name(*v, nullptr, nullptr, nullptr);
      }
      if (v->kind != TermKind::Lift) stuck(t, "force expects a lifted value");
      return eval_gen(g.circuit, v->t1);
    }

    case TermKind::Box: {
      GenResult g = eval_gen(c, t.t1);
      TermPtr v = g.value;
      while (v->kind == TermKind::Var) {
        v = resolve_name(*v, nullptr, nullptr, nullptr);
      }
      if (v->kind != TermKind::Lift) stuck(t, "box expects a lifted builder");
      // Nested generation against a fresh supply: boxed circuits come out
      // with canonical labels independent of the host run.
      LabelSupply nested_supply(0);
      Evaluator nested(env_, nested_supply);
      auto [shape, ctx] = gen(t.ty, nested_supply, t.span);
      GenResult inner =
          nested.eval_gen(identity(ctx), mk::app(v->t1, shape, t.span));
      if (!is_simple_term(inner.value)) {
        stuck(t, "boxed evaluation did not end in a wire bundle");
      }
      auto boxed = std::make_shared<BoxedCircuitValue>();
      boxed->input_shape = shape;
      boxed->circuit = std::move(inner.circuit);
      boxed->output_shape = inner.value;
      return {g.circuit, mk::boxed_circ(std::move(boxed), t.span)};
    }

    case TermKind::Apply: {
      GenResult cf = eval_gen(c, t.t1);
      GenResult av = eval_gen(cf.circuit, t.t2);
      if (cf.value->kind != TermKind::BoxedCirc) {
        stuck(t, "apply expects a boxed circuit");
      }
      if (!is_simple_term(av.value)) stuck(t, "apply expects a wire bundle");
      const BoxedCircuitValue& d = *cf.value->circ;
      AppendResult res = append_full(d.circuit, av.circuit, d.input_shape,
                                     av.value, supply_);
      return {std::move(res.circuit),
              relabel_term(d.output_shape, res.relabel)};
    }

    case TermKind::Pair: {
      GenResult a = eval_gen(c, t.t1);
      GenResult b = eval_gen(a.circuit, t.t2);
      return {b.circuit, mk::pair(a.value, b.value, t.span)};
    }

    case TermKind::LetPair: {
      GenResult rhs = eval_gen(c, t.t1);
      if (rhs.value->kind != TermKind::Pair) stuck(t, "expected a pair value");
      TermPtr body = substitute(t.t2, t.name, rhs.value->t1);
      body = substitute(body, t.name2, rhs.value->t2);
      return eval_gen(rhs.circuit, body);
    }

    case TermKind::LetUnit: {
      GenResult rhs = eval_gen(c, t.t1);
      if (rhs.value->kind != TermKind::UnitVal) stuck(t, "expected ()");
      return eval_gen(rhs.circuit, t.t2);
    }

    case TermKind::If: {
      GenResult cond = eval_gen(c, t.t1);
      if (cond.value->kind != TermKind::BoolLit) {
        stuck(t, "expected a boolean value");
      }
      return eval_gen(cond.circuit, cond.value->flag ? t.t2 : t.t3);
    }

    case TermKind::Succ: {
      GenResult n = eval_gen(c, t.t1);
      if (n.value->kind != TermKind::NatLit) stuck(t, "expected a number");
      return {n.circuit, mk::natlit(n.value->nat + 1, t.span)};
    }

    case TermKind::NatCase: {
      GenResult s = eval_gen(c, t.t1);
      if (s.value->kind != TermKind::NatLit) stuck(t, "expected a number");
      if (s.value->nat == 0) return eval_gen(s.circuit, t.t2);
      TermPtr pred = mk::natlit(s.value->nat - 1, t.span);
      return eval_gen(s.circuit, substitute(t.t3, t.name, pred));
    }

    case TermKind::JustC: {
      GenResult a = eval_gen(c, t.t1);
      return {a.circuit, mk::just(a.value, t.span)};
    }

    case TermKind::MaybeCase: {
      GenResult s = eval_gen(c, t.t1);
      if (s.value->kind == TermKind::NothingC) return eval_gen(s.circuit, t.t2);
      if (s.value->kind == TermKind::JustC) {
        return eval_gen(s.circuit, substitute(t.t3, t.name, s.value->t1));
      }
      stuck(t, "expected Nothing or Just");
    }

    case TermKind::Dynlift:
      throw Error(ErrKind::DynliftAtGenerationTime, t.span,
                  "dynamic lifting is not available during circuit "
                  "generation; box only lifting-free functions");

    default:
      stuck(t, "not a generation-time form");
  }
}

//==============================================================================
// Distribution execution
//==============================================================================

struct Evaluator::Path {
  double mass = 1.0;
  QuantumState state;
  TermPtr value;
  std::map<std::string, int> uses;
};

std::vector<Evaluator::Path> Evaluator::exec(Path in, const TermPtr& m,
                                             const EvalLimits& limits,
                                             double& deficit) {
  if (limits.prune_threshold > 0 && in.mass <= limits.prune_threshold) {
    deficit += in.mass;
    return {};
  }
  if (is_value(m)) {
    in.value = m;
    std::vector<Path> one;
    one.push_back(std::move(in));
    return one;
  }

  const Term& t = *m;
  std::vector<Path> out;

  switch (t.kind) {
    case TermKind::App: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        TermPtr fn = h.value;
        for (Path& a : exec(std::move(h), t.t2, limits, deficit)) {
          TermPtr f = fn;
          bool pruned = false;
          while (f->kind == TermKind::Var) {
            f = resolve_name(*f, &a.uses, &limits, &pruned);
            if (pruned) break;
          }
          if (pruned) {
            deficit += a.mass;
            continue;
          }
          if (f->kind != TermKind::Lambda) {
            stuck(t, "expected a function value");
          }
          TermPtr body = substitute(f->t1, f->name, a.value);
          std::vector<Path> r = exec(std::move(a), body, limits, deficit);
          std::move(r.begin(), r.end(), std::back_inserter(out));
        }
      }
      return out;
    }

    case TermKind::Force: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        TermPtr v = h.value;
        bool pruned = false;
        while (v->kind == TermKind::Var) {
          v = resolve_name(*v, &h.uses, &limits, &pruned);
          if (pruned) break;
        }
        if (pruned) {
          deficit += h.mass;
          continue;
        }
        if (v->kind != TermKind::Lift) stuck(t, "force expects a lifted value");
        std::vector<Path> r = exec(std::move(h), v->t1, limits, deficit);
        std::move(r.begin(), r.end(), std::back_inserter(out));
      }
      return out;
    }

    case TermKind::Box: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        TermPtr v = h.value;
        bool pruned = false;
        while (v->kind == TermKind::Var) {
          v = resolve_name(*v, &h.uses, &limits, &pruned);
          if (pruned) break;
        }
        if (pruned) {
          deficit += h.mass;
          continue;
        }
        if (v->kind != TermKind::Lift) stuck(t, "box expects a lifted builder");
        LabelSupply nested_supply(0);
        Evaluator nested(env_, nested_supply);
        auto [shape, ctx] = gen(t.ty, nested_supply, t.span);
        GenResult inner =
            nested.eval_gen(identity(ctx), mk::app(v->t1, shape, t.span));
        if (!is_simple_term(inner.value)) {
          stuck(t, "boxed evaluation did not end in a wire bundle");
        }
        auto boxed = std::make_shared<BoxedCircuitValue>();
        boxed->input_shape = shape;
        boxed->circuit = std::move(inner.circuit);
        boxed->output_shape = inner.value;
        h.value = mk::boxed_circ(std::move(boxed), t.span);
        out.push_back(std::move(h));
      }
      return out;
    }

    case TermKind::Apply: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        TermPtr cv = h.value;
        if (cv->kind != TermKind::BoxedCirc) {
          stuck(t, "apply expects a boxed circuit");
        }
        for (Path& a : exec(std::move(h), t.t2, limits, deficit)) {
          if (!is_simple_term(a.value)) stuck(t, "apply expects a wire bundle");
          const BoxedCircuitValue& d = *cv->circ;
          OperateResult r = operate_full(d.circuit, a.state, d.input_shape,
                                         a.value, supply_);
          a.state = std::move(r.state);
          a.value = relabel_term(d.output_shape, r.relabel);
          out.push_back(std::move(a));
        }
      }
      return out;
    }

    case TermKind::Dynlift: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        if (h.value->kind != TermKind::Label) {
          stuck(t, "dynlift expects a bit wire");
        }
        // The only probabilistic rule: split the path on the readout.
        for (ReadOutcome& oc : read(h.state, h.value->label)) {
          Path p;
          p.mass = h.mass * oc.prob;
          p.state = std::move(oc.state);
          p.uses = h.uses;
          p.value = mk::boolean(oc.value, t.span);
          out.push_back(std::move(p));
        }
      }
      return out;
    }

    case TermKind::Pair: {
      for (Path& a : exec(std::move(in), t.t1, limits, deficit)) {
        TermPtr av = a.value;
        for (Path& b : exec(std::move(a), t.t2, limits, deficit)) {
          b.value = mk::pair(av, b.value, t.span);
          out.push_back(std::move(b));
        }
      }
      return out;
    }

    case TermKind::LetPair: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        if (h.value->kind != TermKind::Pair) stuck(t, "expected a pair value");
        TermPtr body = substitute(t.t2, t.name, h.value->t1);
        body = substitute(body, t.name2, h.value->t2);
        std::vector<Path> r = exec(std::move(h), body, limits, deficit);
        std::move(r.begin(), r.end(), std::back_inserter(out));
      }
      return out;
    }

    case TermKind::LetUnit: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        if (h.value->kind != TermKind::UnitVal) stuck(t, "expected ()");
        std::vector<Path> r = exec(std::move(h), t.t2, limits, deficit);
        std::move(r.begin(), r.end(), std::back_inserter(out));
      }
      return out;
    }

    case TermKind::If: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        if (h.value->kind != TermKind::BoolLit) {
          stuck(t, "expected a boolean value");
        }
        const TermPtr& branch = h.value->flag ? t.t2 : t.t3;
        std::vector<Path> r = exec(std::move(h), branch, limits, deficit);
        std::move(r.begin(), r.end(), std::back_inserter(out));
      }
      return out;
    }

    case TermKind::Succ: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        if (h.value->kind != TermKind::NatLit) stuck(t, "expected a number");
        h.value = mk::natlit(h.value->nat + 1, t.span);
        out.push_back(std::move(h));
      }
      return out;
    }

    case TermKind::NatCase: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        if (h.value->kind != TermKind::NatLit) stuck(t, "expected a number");
        std::vector<Path> r;
        if (h.value->nat == 0) {
          r = exec(std::move(h), t.t2, limits, deficit);
        } else {
          TermPtr pred = mk::natlit(h.value->nat - 1, t.span);
          r = exec(std::move(h), substitute(t.t3, t.name, pred), limits,
                   deficit);
        }
        std::move(r.begin(), r.end(), std::back_inserter(out));
      }
      return out;
    }

    case TermKind::JustC: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        h.value = mk::just(h.value, t.span);
        out.push_back(std::move(h));
      }
      return out;
    }

    case TermKind::MaybeCase: {
      for (Path& h : exec(std::move(in), t.t1, limits, deficit)) {
        std::vector<Path> r;
        if (h.value->kind == TermKind::NothingC) {
          r = exec(std::move(h), t.t2, limits, deficit);
        } else if (h.value->kind == TermKind::JustC) {
          TermPtr body = substitute(t.t3, t.name, h.value->t1);
          r = exec(std::move(h), body, limits, deficit);
        } else {
          stuck(t, "expected Nothing or Just");
        }
        std::move(r.begin(), r.end(), std::back_inserter(out));
      }
      return out;
    }

    default:
      stuck(t, "not an execution-time form");
  }
}

Distribution<ExecOutcome> Evaluator::eval_exec(const QuantumState& q,
                                               const TermPtr& m,
                                               const EvalLimits& limits) {
  double deficit = 0.0;
  Path in;
  in.mass = 1.0;
  in.state = q;
  std::vector<Path> paths = exec(std::move(in), m, limits, deficit);

  Distribution<ExecOutcome> d;
  d.deficit = deficit;
  for (Path& p : paths) {
    d.entries.push_back({p.mass, {merge_branches(p.state), p.value}});
  }
  d = merge(d, [](const ExecOutcome& x, const ExecOutcome& y) {
    if (!term_equal(x.value, y.value)) return false;
    if (x.state.addr != y.state.addr) return false;
    return state_distance(x.state, y.state) < 1e-9;
  });
  if (d.deficit > limits.mass_cutoff) {
    throw Error(ErrKind::LimitExceeded, m->span,
                "unexplored probability mass " + std::to_string(d.deficit) +
                    " exceeds the cutoff " +
                    std::to_string(limits.mass_cutoff) +
                    "; raise max_depth or the cutoff");
  }
  return d;
}

//==============================================================================
// Sampling
//==============================================================================

TermPtr Evaluator::sample(QuantumState& q, const TermPtr& m,
                          const EvalLimits& limits, std::mt19937_64& rng,
                          std::map<std::string, int>& uses) {
  if (is_value(m)) return m;
  const Term& t = *m;

  auto resolve_chain = [&](TermPtr v) {
    bool pruned = false;
    while (v->kind == TermKind::Var) {
      v = resolve_name(*v, &uses, &limits, &pruned);
      if (pruned) {
        throw Error(ErrKind::LimitExceeded, t.span,
                    "the sampled trajectory exceeded the unfolding budget "
                    "(max depth " +
                        std::to_string(limits.max_depth) + ")");
      }
    }
    return v;
  };

  switch (t.kind) {
    case TermKind::App: {
      TermPtr f = sample(q, t.t1, limits, rng, uses);
      TermPtr a = sample(q, t.t2, limits, rng, uses);
      f = resolve_chain(f);
      if (f->kind != TermKind::Lambda) stuck(t, "expected a function value");
      return sample(q, substitute(f->t1, f->name, a), limits, rng, uses);
    }
    case TermKind::Force: {
      TermPtr v = resolve_chain(sample(q, t.t1, limits, rng, uses));
      if (v->kind != TermKind::Lift) stuck(t, "force expects a lifted value");
      return sample(q, v->t1, limits, rng, uses);
    }
    case TermKind::Box: {
      TermPtr v = resolve_chain(sample(q, t.t1, limits, rng, uses));
      if (v->kind != TermKind::Lift) stuck(t, "box expects a lifted builder");
      LabelSupply nested_supply(0);
      Evaluator nested(env_, nested_supply);
      auto [shape, ctx] = gen(t.ty, nested_supply, t.span);
      GenResult inner =
          nested.eval_gen(identity(ctx), mk::app(v->t1, shape, t.span));
      if (!is_simple_term(inner.value)) {
        stuck(t, "boxed evaluation did not end in a wire bundle");
      }
      auto boxed = std::make_shared<BoxedCircuitValue>();
      boxed->input_shape = shape;
      boxed->circuit = std::move(inner.circuit);
      boxed->output_shape = inner.value;
      return mk::boxed_circ(std::move(boxed), t.span);
    }
    case TermKind::Apply: {
      TermPtr cv = sample(q, t.t1, limits, rng, uses);
      TermPtr av = sample(q, t.t2, limits, rng, uses);
      if (cv->kind != TermKind::BoxedCirc) stuck(t, "apply expects a boxed circuit");
      if (!is_simple_term(av)) stuck(t, "apply expects a wire bundle");
      const BoxedCircuitValue& d = *cv->circ;
      OperateResult r = operate_full(d.circuit, q, d.input_shape, av, supply_);
      q = std::move(r.state);
      return relabel_term(d.output_shape, r.relabel);
    }
    case TermKind::Dynlift: {
      TermPtr v = sample(q, t.t1, limits, rng, uses);
      if (v->kind != TermKind::Label) stuck(t, "dynlift expects a bit wire");
      std::vector<ReadOutcome> outs = read(q, v->label);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double r = u(rng);
      double acc = 0;
      for (ReadOutcome& oc : outs) {
        acc += oc.prob;
        if (r < acc || &oc == &outs.back()) {
          q = std::move(oc.state);
          return mk::boolean(oc.value, t.span);
        }
      }
      throw Error(ErrKind::Internal, t.span, "empty readout");
    }
    case TermKind::Pair: {
      TermPtr a = sample(q, t.t1, limits, rng, uses);
      TermPtr b = sample(q, t.t2, limits, rng, uses);
      return mk::pair(a, b, t.span);
    }
    case TermKind::LetPair: {
      TermPtr v = sample(q, t.t1, limits, rng, uses);
      if (v->kind != TermKind::Pair) stuck(t, "expected a pair value");
      TermPtr body = substitute(t.t2, t.name, v->t1);
      body = substitute(body, t.name2, v->t2);
      return sample(q, body, limits, rng, uses);
    }
    case TermKind::LetUnit: {
      TermPtr v = sample(q, t.t1, limits, rng, uses);
      if (v->kind != TermKind::UnitVal) stuck(t, "expected ()");
      return sample(q, t.t2, limits, rng, uses);
    }
    case TermKind::If: {
      TermPtr v = sample(q, t.t1, limits, rng, uses);
      if (v->kind != TermKind::BoolLit) stuck(t, "expected a boolean value");
      return sample(q, v->flag ? t.t2 : t.t3, limits, rng, uses);
    }
    case TermKind::Succ: {
      TermPtr v = sample(q, t.t1, limits, rng, uses);
      if (v->kind != TermKind::NatLit) stuck(t, "expected a number");
      return mk::natlit(v->nat + 1, t.span);
    }
    case TermKind::NatCase: {
      TermPtr v = sample(q, t.t1, limits, rng, uses);
      if (v->kind != TermKind::NatLit) stuck(t, "expected a number");
      if (v->nat == 0) return sample(q, t.t2, limits, rng, uses);
      TermPtr pred = mk::natlit(v->nat - 1, t.span);
      return sample(q, substitute(t.t3, t.name, pred), limits, rng, uses);
    }
    case TermKind::JustC:
      return mk::just(sample(q, t.t1, limits, rng, uses), t.span);
    case TermKind::MaybeCase: {
      TermPtr v = sample(q, t.t1, limits, rng, uses);
      if (v->kind == TermKind::NothingC) return sample(q, t.t2, limits, rng, uses);
      if (v->kind == TermKind::JustC) {
        return sample(q, substitute(t.t3, t.name, v->t1), limits, rng, uses);
      }
      stuck(t, "expected Nothing or Just");
    }
    default:
      stuck(t, "not an execution-time form");
  }
}

ExecOutcome Evaluator::eval_sample(const QuantumState& q, const TermPtr& m,
                                   const EvalLimits& limits,
                                   std::mt19937_64& rng) {
  std::map<std::string, int> uses;
  QuantumState st = q;
  TermPtr v = sample(st, m, limits, rng, uses);
  return {merge_branches(st), v};
}

//==============================================================================
// Driver
//==============================================================================

std::mt19937_64 shot_rng(uint64_t seed, uint64_t shot) {
  auto mix = [](uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  };
  return std::mt19937_64(mix(seed + mix(shot + 1)));
}

std::string RunReport::json() const {
  nlohmann::ordered_json j;
  j["mode"] = mode == RunMode::Dist ? "dist" : "sample";
  j["outcomes"] = nlohmann::ordered_json::array();
  for (const Outcome& oc : outcomes) {
    nlohmann::ordered_json e;
    e["value"] = oc.value;
    if (mode == RunMode::Dist) {
      e["prob"] = oc.prob;
    } else {
      e["count"] = oc.count;
    }
    if (!oc.state.empty()) e["state"] = oc.state;
    j["outcomes"].push_back(std::move(e));
  }
  j["deficit"] = deficit;
  if (seed) j["seed"] = *seed;
  j["deterministic"] = deterministic;
  return j.dump(2);
}

RunReport run_main(const Env& env, const std::string& entry,
                   const RunOptions& options) {
  const Declaration* d = env.find(entry);
  if (!d) {
    throw Error(ErrKind::UnboundVariable, Span{},
                "entry point '" + entry + "' is not defined");
  }
  TermPtr main_term = mk::force(mk::var(entry, d->span), d->span);

  RunReport report;
  report.mode = options.mode;
  report.deterministic = d->root_modality == Modality::One;

  if (options.mode == RunMode::Dist) {
    LabelSupply supply(0);
    Evaluator ev(env, supply);
    Distribution<ExecOutcome> dist =
        ev.eval_exec(init_state({}), main_term, options.limits);
    if (report.deterministic && dist.entries.size() > 1) {
      throw Error(ErrKind::Internal, d->span,
                  "a modality-1 entry produced more than one outcome");
    }
    for (const auto& [p, oc] : dist.entries) {
      RunReport::Outcome row;
      row.value = pretty_term(oc.value);
      row.prob = p;
      if (!oc.state.addr.empty()) row.state = dump_state(oc.state);
      report.outcomes.push_back(std::move(row));
    }
    report.deficit = dist.deficit;
    return report;
  }

  // Sample mode: every shot draws from its own generator, so results do not
  // depend on the number of worker threads.
  report.seed = options.seed;
  std::vector<std::string> values(options.shots);
  std::vector<std::string> states(options.shots);
  auto run_range = [&](uint64_t lo, uint64_t hi) {
    for (uint64_t s = lo; s < hi; ++s) {
      LabelSupply supply(0);
      Evaluator ev(env, supply);
      std::mt19937_64 rng = shot_rng(options.seed, s);
      ExecOutcome oc =
          ev.eval_sample(init_state({}), main_term, options.limits, rng);
      values[s] = pretty_term(oc.value);
      if (!oc.state.addr.empty()) states[s] = dump_state(oc.state);
    }
  };
  unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1 || options.shots < 2) {
    run_range(0, options.shots);
  } else {
    std::vector<std::thread> workers;
    uint64_t chunk = (options.shots + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      uint64_t lo = w * chunk;
      uint64_t hi = std::min<uint64_t>(options.shots, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(run_range, lo, hi);
    }
    for (auto& th : workers) th.join();
  }

  std::map<std::string, size_t> index;
  for (uint64_t s = 0; s < options.shots; ++s) {
    auto it = index.find(values[s]);
    if (it == index.end()) {
      RunReport::Outcome row;
      row.value = values[s];
      row.count = 1;
      row.state = states[s];
      index.emplace(values[s], report.outcomes.size());
      report.outcomes.push_back(std::move(row));
    } else {
      ++report.outcomes[it->second].count;
    }
  }
  return report;
}

Circuit box_declaration(const Env& env, const std::string& name) {
  const Declaration* d = env.find(name);
  if (!d) {
    throw Error(ErrKind::UnboundVariable, Span{},
                "declaration '" + name + "' is not defined");
  }
  LabelSupply supply(0);
  Evaluator ev(env, supply);
  const TypePtr& ty = d->declared;

  TermPtr term;
  if (ty->kind == TypeKind::Circ) {
    term = mk::force(mk::var(name, d->span), d->span);
  } else if (ty->kind == TypeKind::Bang && ty->a &&
             ty->a->kind == TypeKind::Arrow) {
    if (ty->mod.value != Modality::One || ty->a->mod.value != Modality::One) {
      throw Error(ErrKind::ModalityError, d->span,
                  "cannot box '" + name +
                      "': the builder may perform dynamic lifting "
                      "(modality 0)");
    }
    if (!is_simple_type(ty->a->a) || !is_simple_type(ty->a->b)) {
      throw Error(ErrKind::ShapeMismatch, d->span,
                  "cannot box '" + name +
                      "': its interface types are not wire bundles");
    }
    term = mk::box(ty->a->a, mk::var(name, d->span), d->span);
  } else {
    throw Error(ErrKind::TypeMismatch, d->span,
                "cannot box '" + name + "' : " + pretty_type(ty) +
                    " (need Circ(S, U) or !_1(S -o_1 U))");
  }

  GenResult g = ev.eval_gen(identity({}), term);
  if (g.value->kind != TermKind::BoxedCirc) {
    throw Error(ErrKind::Internal, d->span,
                "boxing did not produce a circuit value");
  }
  return g.value->circ->circuit;
}

}  // namespace pqdyn
