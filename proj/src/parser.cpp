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

#include "pqdyn/parser.hpp"

#include <cstdlib>
#include <memory>
#include <vector>

#include "pqdyn/lexer.hpp"

namespace pqdyn {

namespace {

// Surface patterns for `let`; tuples may nest arbitrarily.
struct Pattern {
  enum class Kind { Var, Unit, Tuple } kind;
  std::string name;                       // Var
  std::vector<Pattern> items;             // Tuple, size >= 2
  Span span{};
};

class Parser {
 public:
  Parser(const std::string& source, const std::string& filename)
      : toks_(lex(source, filename)) {
    stops_.push_back(0);
  }

  Program program(const std::string& filename) {
    Program p;
    p.source_name = filename;
    while (raw().kind != Tok::Eof) {
      p.decls.push_back(declaration());
    }
    return p;
  }

  TermPtr whole_term() {
    TermPtr t = expr();
    if (raw().kind != Tok::Eof) {
      throw Error(ErrKind::Syntax, raw().span,
                  "unexpected '" + describe(raw()) + "' after expression");
    }
    return t;
  }

  TypePtr whole_type() {
    TypePtr t = type();
    if (raw().kind != Tok::Eof) {
      throw Error(ErrKind::Syntax, raw().span,
                  "unexpected '" + describe(raw()) + "' after type");
    }
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::vector<int> stops_;
  int fresh_ = 0;

  const Token& raw() const { return toks_[pos_]; }

  // A token that starts a fresh line at or left of the innermost block
  // column belongs to an enclosing construct; the current one ends there.
  bool blocked() const {
    const Token& t = raw();
    if (t.kind == Tok::Eof) return true;
    return t.first_on_line && t.span.col <= stops_.back();
  }

  bool at(Tok k) const { return !blocked() && raw().kind == k; }

  const Token& take() { return toks_[pos_++]; }

  Token expect(Tok k, const char* what) {
    if (!at(k)) {
      throw Error(ErrKind::Syntax, raw().span,
                  std::string("expected ") + what + ", found '" +
                      describe(raw()) + "'");
    }
    return take();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Eof) return "end of input";
    return t.text;
  }

  std::string fresh_name() { return "%" + std::to_string(++fresh_); }

  //--------------------------------------------------------------------------
  // Declarations
  //--------------------------------------------------------------------------

  SurfaceDecl declaration() {
    const Token& head = raw();
    if (!(head.first_on_line && head.span.col == 1)) {
      throw Error(ErrKind::Syntax, head.span,
                  "declarations must start in column 1");
    }
    if (head.kind != Tok::Ident) {
      throw Error(ErrKind::Syntax, head.span,
                  "expected a declaration name, found '" + describe(head) +
                      "'");
    }
    SurfaceDecl d;
    d.name = head.text;
    d.span = head.span;
    take();
    stops_.push_back(1);
    expect(Tok::Colon, "':' after the declaration name");
    d.declared = type();
    stops_.pop_back();

    const Token& eq = raw();
    if (eq.kind != Tok::Ident || eq.text != d.name ||
        !(eq.first_on_line && eq.span.col == 1)) {
      throw Error(ErrKind::Syntax, eq.span,
                  "expected the defining equation for '" + d.name +
                      "' in column 1");
    }
    take();
    stops_.push_back(1);
    while (at(Tok::Ident)) d.params.push_back(take().text);
    expect(Tok::Equals, "'=' in the defining equation");
    d.body = expr();
    stops_.pop_back();
    return d;
  }

  //--------------------------------------------------------------------------
  // Types
  //--------------------------------------------------------------------------

  TypePtr type() {
    TypePtr left = tensor_type();
    if (at(Tok::Arrow) || at(Tok::Lolli)) {
      take();
      return types::arrow(left, ModTerm::elided(), type());
    }
    if (at(Tok::LolliZero) || at(Tok::LolliOne)) {
      Modality m = take().kind == Tok::LolliOne ? Modality::One
                                                : Modality::Zero;
      return types::arrow(left, ModTerm::constant(m), type());
    }
    return left;
  }

  TypePtr tensor_type() {
    TypePtr left = type_atom();
    if (at(Tok::Star)) {
      take();
      return types::tensor(left, tensor_type());
    }
    return left;
  }

  TypePtr type_atom() {
    if (blocked()) {
      throw Error(ErrKind::Syntax, raw().span, "expected a type");
    }
    const Token& t = raw();
    switch (t.kind) {
      case Tok::KwUnit:
        take();
        return types::unit();
      case Tok::KwQubit:
        take();
        return types::qubit();
      case Tok::KwBit:
        take();
        return types::bit();
      case Tok::KwBool:
        take();
        return types::boolean();
      case Tok::KwNat:
        take();
        return types::nat();
      case Tok::KwMaybe:
        take();
        return types::maybe(type_atom());
      case Tok::KwCirc: {
        take();
        expect(Tok::LParen, "'(' after Circ");
        TypePtr s = type();
        expect(Tok::Comma, "',' between the Circ interface types");
        TypePtr u = type();
        expect(Tok::RParen, "')' closing Circ");
        return types::circ(s, u);
      }
      case Tok::Bang:
        take();
        return types::bang(ModTerm::elided(), type_atom());
      case Tok::BangZero:
      case Tok::BangOne: {
        Modality m =
            take().kind == Tok::BangOne ? Modality::One : Modality::Zero;
        return types::bang(ModTerm::constant(m), type_atom());
      }
      case Tok::LParen: {
        take();
        if (at(Tok::RParen)) {
          take();
          return types::unit();
        }
        TypePtr inner = type();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw Error(ErrKind::Syntax, t.span,
                    "expected a type, found '" + describe(t) + "'");
    }
  }

  //--------------------------------------------------------------------------
  // Patterns
  //--------------------------------------------------------------------------

  Pattern pattern() {
    if (blocked()) {
      throw Error(ErrKind::Syntax, raw().span, "expected a pattern");
    }
    const Token& t = raw();
    Pattern p;
    p.span = t.span;
    if (t.kind == Tok::Ident) {
      p.kind = Pattern::Kind::Var;
      p.name = take().text;
      return p;
    }
    if (t.kind == Tok::Underscore) {
      take();
      p.kind = Pattern::Kind::Var;
      p.name = "_";
      return p;
    }
    if (t.kind == Tok::LParen) {
      take();
      if (at(Tok::RParen)) {
        take();
        p.kind = Pattern::Kind::Unit;
        return p;
      }
      std::vector<Pattern> items;
      items.push_back(pattern());
      while (at(Tok::Comma)) {
        take();
        items.push_back(pattern());
      }
      expect(Tok::RParen, "')' closing the pattern");
      if (items.size() == 1) return items[0];
      p.kind = Pattern::Kind::Tuple;
      p.items = std::move(items);
      return p;
    }
    throw Error(ErrKind::Syntax, t.span,
                "expected a pattern, found '" + describe(t) + "'");
  }

  // let <pat> = rhs in body, as nested pair/unit eliminations. Plain
  // variables become an immediate application; nested patterns bind fresh
  // intermediates.
  TermPtr desugar_let(const Pattern& p, TermPtr rhs, TermPtr body, Span sp) {
    switch (p.kind) {
      case Pattern::Kind::Unit:
        return mk::let_unit(rhs, body, sp);
      case Pattern::Kind::Var:
        return mk::app(mk::lambda(p.name, body, sp), rhs, sp);
      case Pattern::Kind::Tuple: {
        // (p0, p1, ..., pn) matches as p0 against the first component and
        // (p1, ..., pn) against the rest.
        const Pattern& head = p.items[0];
        Pattern rest;
        if (p.items.size() == 2) {
          rest = p.items[1];
        } else {
          rest.kind = Pattern::Kind::Tuple;
          rest.span = p.span;
          rest.items.assign(p.items.begin() + 1, p.items.end());
        }
        std::string x = head.kind == Pattern::Kind::Var ? head.name
                                                        : fresh_name();
        std::string y = rest.kind == Pattern::Kind::Var ? rest.name
                                                        : fresh_name();
        TermPtr inner = body;
        if (rest.kind != Pattern::Kind::Var) {
          inner = desugar_let(rest, mk::var(y, sp), inner, sp);
        }
        if (head.kind != Pattern::Kind::Var) {
          inner = desugar_let(head, mk::var(x, sp), inner, sp);
        }
        return mk::let_pair(x, y, rhs, inner, sp);
      }
    }
    throw Error(ErrKind::Internal, sp, "unreachable pattern kind");
  }

  //--------------------------------------------------------------------------
  // Terms
  //--------------------------------------------------------------------------

  TermPtr expr() {
    TermPtr left = operand();
    while (at(Tok::OrOr)) {
      Span sp = take().span;
      TermPtr right = operand();
      left = mk::app(mk::app(mk::var("or", sp), left, sp), right, sp);
    }
    return left;
  }

  TermPtr operand() {
    if (blocked()) {
      throw Error(ErrKind::Syntax, raw().span, "expected an expression");
    }
    switch (raw().kind) {
      case Tok::Backslash:
        return lambda_expr();
      case Tok::KwLet:
        return let_expr();
      case Tok::KwIf:
        return if_expr();
      case Tok::KwCase:
        return case_expr();
      default:
        return application();
    }
  }

  TermPtr lambda_expr() {
    Span sp = expect(Tok::Backslash, "'\\'").span;
    std::vector<std::string> params;
    while (at(Tok::Ident) || at(Tok::Underscore)) {
      const Token& tk = take();
      params.push_back(tk.kind == Tok::Underscore ? "_" : tk.text);
    }
    if (params.empty()) {
      throw Error(ErrKind::Syntax, raw().span,
                  "expected at least one parameter after '\\'");
    }
    expect(Tok::Arrow, "'->' after the lambda parameters");
    TermPtr body = expr();
    for (auto it = params.rbegin(); it != params.rend(); ++it) {
      body = mk::lambda(*it, body, sp);
    }
    return body;
  }

  // let <pat> = <rhs> [<pat> = <rhs> ...] in <body>. Bindings after the
  // first align at the column of the first pattern; each right-hand side
  // extends until a new line reaches back to that column. Bindings scope
  // sequentially, so later ones may shadow earlier ones.
  TermPtr let_expr() {
    expect(Tok::KwLet, "'let'");
    if (blocked()) {
      throw Error(ErrKind::Syntax, raw().span,
                  "expected a binding after 'let'");
    }
    int bcol = raw().span.col;

    struct Binding {
      Pattern p;
      TermPtr rhs;
      Span span;
    };
    std::vector<Binding> bs;
    while (true) {
      Binding b;
      b.span = raw().span;
      b.p = pattern();
      expect(Tok::Equals, "'=' in the let binding");
      stops_.push_back(bcol);
      b.rhs = expr();
      stops_.pop_back();
      bs.push_back(std::move(b));

      const Token& next = raw();
      bool more = next.kind != Tok::Eof && next.first_on_line &&
                  next.span.col == bcol &&
                  (next.kind == Tok::Ident || next.kind == Tok::Underscore ||
                   next.kind == Tok::LParen);
      if (!more) break;
    }

    expect(Tok::KwIn, "'in' after the let bindings");
    TermPtr body = expr();
    for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
      body = desugar_let(it->p, it->rhs, body, it->span);
    }
    return body;
  }

  TermPtr if_expr() {
    Span sp = expect(Tok::KwIf, "'if'").span;
    TermPtr c = expr();
    expect(Tok::KwThen, "'then'");
    TermPtr t = expr();
    expect(Tok::KwElse, "'else'");
    TermPtr e = expr();
    return mk::if_then_else(c, t, e, sp);
  }

  struct Branch {
    Tok head;
    std::string binder;
    TermPtr body;
    Span span;
  };

  TermPtr case_expr() {
    Span sp = expect(Tok::KwCase, "'case'").span;
    TermPtr scrut = expr();
    expect(Tok::KwOf, "'of' after the case scrutinee");
    if (blocked()) {
      throw Error(ErrKind::Syntax, raw().span,
                  "case needs at least one branch");
    }
    int col = raw().span.col;
    if (col <= stops_.back()) {
      throw Error(ErrKind::Syntax, raw().span,
                  "case branches must be indented past the enclosing block");
    }

    std::vector<Branch> branches;
    while (true) {
      branches.push_back(case_branch(col));
      const Token& next = raw();
      if (next.kind == Tok::Eof) break;
      if (!(next.first_on_line && next.span.col == col)) break;
      if (!branch_start(next.kind)) break;
    }
    return assemble_case(scrut, branches, sp);
  }

  static bool branch_start(Tok k) {
    return k == Tok::KwZ || k == Tok::KwS || k == Tok::KwNothing ||
           k == Tok::KwJust || k == Tok::KwTrue || k == Tok::KwFalse;
  }

  Branch case_branch(int col) {
    Branch br;
    br.span = raw().span;
    br.head = raw().kind;
    if (!branch_start(br.head)) {
      throw Error(ErrKind::Syntax, raw().span,
                  "expected a case branch (Z, S x, Nothing, Just x, True, "
                  "False)");
    }
    take();
    if (br.head == Tok::KwS || br.head == Tok::KwJust) {
      const Token& b = raw();
      if (b.kind != Tok::Ident && b.kind != Tok::Underscore) {
        throw Error(ErrKind::Syntax, b.span,
                    "expected a binder in the case branch");
      }
      br.binder = b.kind == Tok::Underscore ? "_" : b.text;
      take();
    }
    if (raw().kind != Tok::Arrow) {
      throw Error(ErrKind::Syntax, raw().span,
                  "expected '->' after the case pattern");
    }
    take();
    stops_.push_back(col);
    br.body = expr();
    stops_.pop_back();
    return br;
  }

  TermPtr assemble_case(const TermPtr& scrut, std::vector<Branch>& brs,
                        Span sp) {
    auto find = [&](Tok k) -> Branch* {
      Branch* found = nullptr;
      for (auto& b : brs) {
        if (b.head != k) continue;
        if (found) {
          throw Error(ErrKind::Syntax, b.span, "duplicate case branch");
        }
        found = &b;
      }
      return found;
    };
    auto need_pair = [&](Tok k1, Tok k2, const char* what) {
      if (brs.size() != 2 || !find(k1) || !find(k2)) {
        throw Error(ErrKind::Syntax, sp,
                    std::string("case on a ") + what +
                        " needs exactly both branches");
      }
    };
    switch (brs[0].head) {
      case Tok::KwZ:
      case Tok::KwS: {
        need_pair(Tok::KwZ, Tok::KwS, "Nat (Z and S x)");
        Branch* z = find(Tok::KwZ);
        Branch* s = find(Tok::KwS);
        return mk::nat_case(scrut, z->body, s->binder, s->body, sp);
      }
      case Tok::KwNothing:
      case Tok::KwJust: {
        need_pair(Tok::KwNothing, Tok::KwJust, "Maybe (Nothing and Just x)");
        Branch* n = find(Tok::KwNothing);
        Branch* j = find(Tok::KwJust);
        return mk::maybe_case(scrut, n->body, j->binder, j->body, sp);
      }
      default: {
        need_pair(Tok::KwTrue, Tok::KwFalse, "Bool (True and False)");
        Branch* t = find(Tok::KwTrue);
        Branch* f = find(Tok::KwFalse);
        return mk::if_then_else(scrut, t->body, f->body, sp);
      }
    }
  }

  static bool atom_start(Tok k) {
    switch (k) {
      case Tok::Ident:
      case Tok::Number:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::KwZ:
      case Tok::KwS:
      case Tok::KwNothing:
      case Tok::KwJust:
      case Tok::LParen:
      case Tok::KwLift:
      case Tok::KwForce:
      case Tok::KwDynlift:
      case Tok::KwBox:
      case Tok::KwApply:
        return true;
      default:
        return false;
    }
  }

  TermPtr application() {
    TermPtr head = atom();
    while (!blocked() && atom_start(raw().kind)) {
      Span sp = raw().span;
      head = mk::app(head, atom(), sp);
    }
    return head;
  }

  TermPtr atom() {
    if (blocked()) {
      throw Error(ErrKind::Syntax, raw().span, "expected an expression");
    }
    const Token& t = raw();
    Span sp = t.span;
    switch (t.kind) {
      case Tok::Ident:
        take();
        return mk::var(t.text, sp);
      case Tok::Number: {
        take();
        return mk::natlit(std::strtoull(t.text.c_str(), nullptr, 10), sp);
      }
      case Tok::KwTrue:
        take();
        return mk::boolean(true, sp);
      case Tok::KwFalse:
        take();
        return mk::boolean(false, sp);
      case Tok::KwZ:
        take();
        return mk::natlit(0, sp);
      case Tok::KwS:
        take();
        return mk::succ(atom(), sp);
      case Tok::KwNothing:
        take();
        return mk::nothing(sp);
      case Tok::KwJust:
        take();
        return mk::just(atom(), sp);
      case Tok::KwLift:
        take();
        return mk::lift(atom(), sp);
      case Tok::KwForce:
        take();
        return mk::force(atom(), sp);
      case Tok::KwDynlift:
        take();
        return mk::dynlift(atom(), sp);
      case Tok::KwBox: {
        take();
        TypePtr s = type_atom();
        return mk::box(s, atom(), sp);
      }
      case Tok::KwApply: {
        take();
        expect(Tok::LParen, "'(' after apply");
        TermPtr c = expr();
        expect(Tok::Comma, "',' between the apply operands");
        TermPtr v = expr();
        expect(Tok::RParen, "')' closing apply");
        return mk::apply(c, v, sp);
      }
      case Tok::LParen: {
        take();
        if (at(Tok::RParen)) {
          take();
          return mk::unit(sp);
        }
        std::vector<TermPtr> items;
        items.push_back(expr());
        while (at(Tok::Comma)) {
          take();
          items.push_back(expr());
        }
        expect(Tok::RParen, "')'");
        TermPtr out = items.back();
        for (size_t i = items.size() - 1; i-- > 0;) {
          out = mk::pair(items[i], out, sp);
        }
        return out;
      }
      default:
        throw Error(ErrKind::Syntax, sp,
                    "expected an expression, found '" + describe(t) + "'");
    }
  }
};

}  // namespace

Program parse_program(const std::string& source,
                      const std::string& filename) {
  Parser p(source, filename);
  return p.program(filename);
}

TermPtr parse_term(const std::string& source, const std::string& filename) {
  Parser p(source, filename);
  return p.whole_term();
}

TypePtr parse_type(const std::string& source, const std::string& filename) {
  Parser p(source, filename);
  return p.whole_type();
}

}  // namespace pqdyn
