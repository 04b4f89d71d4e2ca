// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/syntax.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace metta {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  LParen, RParen, LBrace, RBrace,
  Pipe, Dot, Amp, Comma, At, Underscore, Caret, Colon, Semi,
  ArrowLin, ArrowRep, ArrowPeek, Ellipsis, Interleave, SendRecv,
  DefEq, Eq, Plus, Star,
  Ident, Var, Int, UInt, Float, Str, Uri, KidLit,
  End,
};

struct Token {
  Tok kind = Tok::End;
  SourceSpan span;
  std::string text;   // Ident/Var/Str/Uri payload, KidLit hex
  int64_t ival = 0;
  uint64_t uval = 0;
  double fval = 0.0;
};

struct LexFail {
  ParseError err;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  // Receipt separators and comments share ';'. Inside receipts the parser
  // raises this counter and ';' lexes as a separator instead of a comment.
  void push_semi_mode() { ++semi_mode_; }
  void pop_semi_mode() { --semi_mode_; }

  Token peek() {
    if (!buffered_) {
      buffered_ = lex();
    }
    return *buffered_;
  }

  Token next() {
    Token t = peek();
    buffered_.reset();
    return t;
  }

  // Reads exactly 64 raw hex characters (a signature tag). Must not be
  // called with a buffered token pending.
  std::string read_hex64() {
    if (buffered_) {
      if (buffered_->kind == Tok::End) fail(buffered_->span, "unexpected end of input");
      // Re-lexing a buffered token as hex is a parser bug; treat as error.
      fail(buffered_->span, "expected a 64-digit hex tag");
    }
    skip_trivia();
    SourceSpan span = here();
    std::string out;
    for (int n = 0; n < 64; ++n) {
      if (pos_ >= src_.size() || !is_hex(src_[pos_]))
        fail(here(), "expected a 64-digit hex tag");
      out.push_back(src_[pos_]);
      advance();
    }
    (void)span;
    return out;
  }

  [[noreturn]] void fail(const SourceSpan& span, std::string msg,
                         std::vector<std::string> expected = {}) {
    ParseError e;
    e.span = span;
    e.message = std::move(msg);
    e.expected = std::move(expected);
    throw LexFail{std::move(e)};
  }

  SourceSpan here() const {
    SourceSpan s;
    s.start = s.end = scalar_pos_;
    s.line = line_;
    s.column = column_;
    return s;
  }

 private:
  static bool is_hex(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
  static bool is_ident_char(char c) { return is_alpha(c) || is_digit(c) || c == '_' || c == '-'; }
  static bool is_var_char(char c) {
    return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == '~' || c == '\'';
  }

  void advance() {
    char c = src_[pos_++];
    if ((c & 0xC0) != 0x80) ++scalar_pos_;  // count unicode scalar values
    if (c == '\n') {
      ++line_;
      column_ = 0;
    } else if ((c & 0xC0) != 0x80) {
      ++column_;
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == ';' && semi_mode_ == 0) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, const SourceSpan& start) {
    Token t;
    t.kind = kind;
    t.span = start;
    t.span.end = scalar_pos_;
    return t;
  }

  Token lex_number(const SourceSpan& start) {
    size_t begin = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') advance();
    if (pos_ + 2 < src_.size() + 1 && src_.compare(pos_, 3, "inf") == 0) {
      advance(); advance(); advance();
      Token t = make(Tok::Float, start);
      t.fval = src_[begin] == '-' ? -HUGE_VAL : HUGE_VAL;
      return t;
    }
    bool is_float = false;
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    if (pos_ < src_.size() && src_[pos_] == '.' && pos_ + 1 < src_.size() &&
        is_digit(src_[pos_ + 1])) {
      is_float = true;
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t save = pos_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        is_float = true;
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
      } else {
        pos_ = save;  // 'e' belongs to a following identifier
      }
    }
    std::string text = src_.substr(begin, pos_ - begin);
    if (is_float) {
      Token t = make(Tok::Float, start);
      t.fval = std::strtod(text.c_str(), nullptr);  // out of range becomes inf
      return t;
    }
    if (pos_ < src_.size() && src_[pos_] == 'u') {
      if (text[0] == '-') fail(start, "unsigned literals cannot be negative");
      advance();
      Token t = make(Tok::UInt, start);
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t.uval);
      if (ec != std::errc() || p != text.data() + text.size())
        fail(start, "unsigned literal out of range");
      return t;
    }
    Token t = make(Tok::Int, start);
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t.ival);
    if (ec != std::errc() || p != text.data() + text.size())
      fail(start, "integer literal out of range");
    return t;
  }

  Token lex_string(const SourceSpan& start) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail(start, "unterminated string literal");
      char c = src_[pos_];
      if (c == '"') {
        advance();
        Token t = make(Tok::Str, start);
        t.text = std::move(out);
        return t;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail(start, "unterminated string escape");
        char e = src_[pos_];
        advance();
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case 'x': {
            if (pos_ + 1 >= src_.size() || !is_hex(src_[pos_]) || !is_hex(src_[pos_ + 1]))
              fail(here(), "\\x needs two hex digits");
            auto hexval = [](char h) {
              return h <= '9' ? h - '0' : (h | 0x20) - 'a' + 10;
            };
            out.push_back(static_cast<char>(hexval(src_[pos_]) * 16 + hexval(src_[pos_ + 1])));
            advance();
            advance();
            break;
          }
          default: fail(here(), std::string("unknown string escape \\") + e);
        }
      } else {
        out.push_back(c);
        advance();
      }
    }
  }

  Token lex_uri(const SourceSpan& start) {
    advance();  // opening backtick
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail(start, "unterminated uri literal");
      char c = src_[pos_];
      if (c == '`') {
        advance();
        Token t = make(Tok::Uri, start);
        t.text = std::move(out);
        return t;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail(start, "unterminated uri escape");
        char e = src_[pos_];
        advance();
        if (e == '`' || e == '\\') out.push_back(e);
        else fail(here(), std::string("unknown uri escape \\") + e);
      } else {
        out.push_back(c);
        advance();
      }
    }
  }

  Token lex() {
    skip_trivia();
    SourceSpan start = here();
    if (pos_ >= src_.size()) return make(Tok::End, start);
    char c = src_[pos_];
    switch (c) {
      case '(': advance(); return make(Tok::LParen, start);
      case ')': advance(); return make(Tok::RParen, start);
      case '{': advance(); return make(Tok::LBrace, start);
      case '}': advance(); return make(Tok::RBrace, start);
      case '|': advance(); return make(Tok::Pipe, start);
      case '&': advance(); return make(Tok::Amp, start);
      case ',': advance(); return make(Tok::Comma, start);
      case '@': advance(); return make(Tok::At, start);
      case '^': advance(); return make(Tok::Caret, start);
      case ';': advance(); return make(Tok::Semi, start);  // only in receipt mode
      case '=': advance(); return make(Tok::Eq, start);
      case '"': return lex_string(start);
      case '`': return lex_uri(start);
      case '.': {
        advance();
        if (pos_ + 1 < src_.size() + 1 && src_.compare(pos_, 2, "..") == 0) {
          advance();
          advance();
          return make(Tok::Ellipsis, start);
        }
        return make(Tok::Dot, start);
      }
      case ':': {
        advance();
        if (pos_ + 1 < src_.size() + 1 && src_.compare(pos_, 2, ":=") == 0) {
          advance();
          advance();
          return make(Tok::DefEq, start);
        }
        return make(Tok::Colon, start);
      }
      case '<': {
        advance();
        if (pos_ < src_.size()) {
          char d = src_[pos_];
          if (d == '-') { advance(); return make(Tok::ArrowLin, start); }
          if (d == '=') { advance(); return make(Tok::ArrowRep, start); }
          if (d == '~') { advance(); return make(Tok::ArrowPeek, start); }
        }
        fail(start, "expected <-, <= or <~");
      }
      case '?': {
        advance();
        if (pos_ < src_.size() && src_[pos_] == '!') { advance(); return make(Tok::Interleave, start); }
        fail(start, "expected ?!");
      }
      case '!': {
        advance();
        if (pos_ < src_.size() && src_[pos_] == '?') { advance(); return make(Tok::SendRecv, start); }
        fail(start, "expected !?");
      }
      case '$': {
        advance();
        std::string name;
        while (pos_ < src_.size() && is_var_char(src_[pos_])) {
          name.push_back(src_[pos_]);
          advance();
        }
        if (name.empty()) fail(start, "variable name must be nonempty");
        Token t = make(Tok::Var, start);
        t.text = std::move(name);
        return t;
      }
      case '_': {
        advance();
        return make(Tok::Underscore, start);
      }
      case '+':
      case '-': {
        if (pos_ + 1 < src_.size() &&
            (is_digit(src_[pos_ + 1]) || src_.compare(pos_ + 1, 3, "inf") == 0)) {
          return lex_number(start);
        }
        advance();
        if (c == '+') return make(Tok::Plus, start);
        fail(start, "unexpected '-'");
      }
      case '*': advance(); return make(Tok::Star, start);
      default: break;
    }
    if (is_digit(c)) return lex_number(start);
    if (is_alpha(c)) {
      std::string name;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
        name.push_back(src_[pos_]);
        advance();
      }
      if (name == "kid" && pos_ + 2 < src_.size() && src_.compare(pos_, 3, ":0x") == 0) {
        advance(); advance(); advance();
        std::string hex;
        for (int n = 0; n < 16; ++n) {
          if (pos_ >= src_.size() || !is_hex(src_[pos_]))
            fail(here(), "key id needs 16 hex digits");
          hex.push_back(src_[pos_]);
          advance();
        }
        Token t = make(Tok::KidLit, start);
        t.text = std::move(hex);
        return t;
      }
      Token t = make(Tok::Ident, start);
      t.text = std::move(name);
      return t;
    }
    fail(start, "unexpected character");
  }

  const std::string& src_;
  size_t pos_ = 0;
  size_t scalar_pos_ = 0;
  size_t line_ = 0;
  size_t column_ = 0;
  int semi_mode_ = 0;
  std::optional<Token> buffered_;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Term term() {
    Token t = lex_.next();
    return term_from(t);
  }

  std::vector<Term> terms_until_end() {
    std::vector<Term> out;
    while (lex_.peek().kind != Tok::End) out.push_back(term());
    return out;
  }

  void expect_end() {
    Token t = lex_.peek();
    if (t.kind != Tok::End) lex_.fail(t.span, "trailing input after term");
  }

  AnyState state() {
    struct Item {
      Term term;
      std::optional<SignedTerm> sig;
    };
    std::map<std::string, std::vector<Item>> regs;
    std::map<KeyId, Eo> ledger;
    bool saw_eos = false;
    bool saw_sig = false;
    std::vector<std::string> seen;
    while (lex_.peek().kind != Tok::End) {
      Token name = lex_.next();
      if (name.kind != Tok::Ident ||
          (name.text != "i" && name.text != "k" && name.text != "w" && name.text != "o" &&
           name.text != "eos"))
        lex_.fail(name.span, "expected a section header", {"i:", "k:", "w:", "o:", "eos:"});
      for (const auto& s : seen)
        if (s == name.text) lex_.fail(name.span, "duplicate section " + name.text);
      seen.push_back(name.text);
      expect(Tok::Colon, ":");
      expect(Tok::LBrace, "{");
      if (name.text == "eos") {
        saw_eos = true;
        while (lex_.peek().kind != Tok::RBrace) {
          expect(Tok::LParen, "(");
          Token kid = lex_.next();
          if (kid.kind != Tok::KidLit) lex_.fail(kid.span, "expected kid:0x<16 hex>");
          Token amount = lex_.next();
          if (amount.kind != Tok::Int) lex_.fail(amount.span, "expected an effort amount");
          expect(Tok::RParen, ")");
          KeyId key = *KeyId::from_hex(kid.text);
          ledger[key] += amount.ival;  // duplicate entries merge by addition
        }
        lex_.next();  // RBrace
        continue;
      }
      auto& items = regs[name.text];
      while (lex_.peek().kind != Tok::RBrace) {
        Item item;
        item.term = term();
        if (lex_.peek().kind == Tok::Caret) {
          lex_.next();
          expect(Tok::LParen, "(");
          Token kid = lex_.next();
          if (kid.kind != Tok::KidLit) lex_.fail(kid.span, "expected kid:0x<16 hex>");
          SignedTerm st;
          st.term = item.term;
          st.key = *KeyId::from_hex(kid.text);
          Token eo = lex_.next();
          if (eo.kind == Tok::Int) st.eo = eo.ival;
          else if (eo.kind != Tok::Underscore)
            lex_.fail(eo.span, "expected an effort amount or _");
          std::string hex = lex_.read_hex64();
          for (int n = 0; n < 32; ++n) {
            auto hv = [](char h) {
              return h <= '9' ? h - '0' : (h | 0x20) - 'a' + 10;
            };
            st.tag[n] = static_cast<unsigned char>(hv(hex[2 * n]) * 16 + hv(hex[2 * n + 1]));
          }
          expect(Tok::RParen, ")");
          item.sig = std::move(st);
          saw_sig = true;
        }
        items.push_back(std::move(item));
      }
      lex_.next();  // RBrace
    }
    bool resourced = saw_eos || saw_sig;
    if (!resourced) {
      State s;
      auto fill = [&](const char* r, TermBag& bag) {
        std::vector<Term> ts;
        for (auto& it : regs[r]) ts.push_back(it.term);
        bag = TermBag::of(std::move(ts));
      };
      fill("i", s.i);
      fill("k", s.k);
      fill("w", s.w);
      fill("o", s.o);
      return s;
    }
    RState s;
    s.eos = std::move(ledger);
    auto fill = [&](const char* r, SignedBag& bag) {
      std::vector<SignedTerm> ts;
      for (auto& it : regs[r]) {
        if (!it.sig)
          lex_.fail(lex_.here(),
                    std::string("register ") + r +
                        " holds an unsigned term in a resource state");
        ts.push_back(*it.sig);
      }
      bag = SignedBag::of(std::move(ts));
    };
    fill("i", s.i);
    fill("k", s.k);
    fill("w", s.w);
    fill("o", s.o);
    return s;
  }

 private:
  void expect(Tok kind, const char* what) {
    Token t = lex_.next();
    if (t.kind != kind) lex_.fail(t.span, std::string("expected ") + what, {what});
  }

  Term term_from(const Token& t) {
    switch (t.kind) {
      case Tok::LParen: return collection(true);
      case Tok::LBrace: return collection(false);
      case Tok::Int: return Term::integer(t.ival);
      case Tok::UInt: return Term::uinteger(t.uval);
      case Tok::Float: return Term::floating(t.fval);
      case Tok::Str: return Term::str(t.text);
      case Tok::Uri: return Term::uri(t.text);
      case Tok::Var: return Term::var(t.text);
      case Tok::Underscore: return Term::wildcard();
      case Tok::DefEq: return Term::builtin(BuiltinSym::DefEq);
      case Tok::Eq: return Term::builtin(BuiltinSym::Eq);
      case Tok::Plus: return Term::builtin(BuiltinSym::Plus);
      case Tok::Star: return Term::builtin(BuiltinSym::Times);
      case Tok::Ident: {
        if (t.text == "true") return Term::boolean(true);
        if (t.text == "false") return Term::boolean(false);
        if (t.text == "transform") return Term::builtin(BuiltinSym::Transform);
        if (t.text == "addAtom") return Term::builtin(BuiltinSym::AddAtom);
        if (t.text == "remAtom") return Term::builtin(BuiltinSym::RemAtom);
        if (t.text == "inf") return Term::floating(HUGE_VAL);
        if (t.text == "nan") return Term::floating(NAN);
        return Term::sym(t.text);
      }
      default:
        lex_.fail(t.span, "expected a term");
    }
  }

  Term collection(bool is_list) {
    Tok closer = is_list ? Tok::RParen : Tok::RBrace;
    if (lex_.peek().kind == closer) {
      lex_.next();
      return is_list ? Term::unit_list() : Term::unit_bag();
    }
    Term first = term();
    if (lex_.peek().kind == Tok::Pipe) {
      lex_.next();
      lex_.push_semi_mode();
      std::vector<Receipt> receipts = receipt_seq();
      Token dot = lex_.next();
      if (dot.kind != Tok::Dot) lex_.fail(dot.span, "expected . after receipts", {"."});
      lex_.pop_semi_mode();
      std::vector<Term> body;
      while (lex_.peek().kind != closer) body.push_back(term());
      lex_.next();
      return is_list ? Term::list_comp(first, std::move(receipts), std::move(body))
                     : Term::bag_comp(first, std::move(receipts), std::move(body));
    }
    std::vector<Term> items{first};
    while (lex_.peek().kind != closer) items.push_back(term());
    lex_.next();
    return is_list ? Term::list(std::move(items)) : Term::bag(std::move(items));
  }

  std::vector<Receipt> receipt_seq() {
    std::vector<Receipt> out;
    out.push_back(receipt());
    while (lex_.peek().kind == Tok::Semi) {
      lex_.next();
      out.push_back(receipt());
    }
    return out;
  }

  Receipt receipt() {
    Receipt r;
    auto [bind, kind] = one_bind();
    r.kind = kind;
    r.binds.push_back(std::move(bind));
    while (lex_.peek().kind == Tok::Amp) {
      lex_.next();
      auto [more, more_kind] = one_bind();
      if (more_kind != kind)
        lex_.fail(lex_.here(), "binds in one receipt must share the arrow kind");
      r.binds.push_back(std::move(more));
    }
    return r;
  }

  NamePattern name_pattern() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::Underscore: return NamePattern::wildcard();
      case Tok::Var: return NamePattern::variable(t.text);
      case Tok::At: return NamePattern::quote(term());
      default: lex_.fail(t.span, "expected a name", {"_", "$var", "@term"});
    }
  }

  std::pair<Bind, ReceiptKind> one_bind() {
    Bind b;
    Tok k = lex_.peek().kind;
    while (k == Tok::Underscore || k == Tok::Var || k == Tok::At) {
      b.names.push_back(name_pattern());
      if (lex_.peek().kind != Tok::Comma) break;
      lex_.next();
      k = lex_.peek().kind;
    }
    if (lex_.peek().kind == Tok::Ellipsis) {
      lex_.next();
      NameRemainder rem;
      if (lex_.peek().kind == Tok::At) {
        lex_.next();
        rem.quoted = true;
      }
      Token v = lex_.next();
      if (v.kind == Tok::Var) rem.var = v.text;
      else if (v.kind == Tok::Underscore) rem.var = "_";
      else lex_.fail(v.span, "expected a variable or _ after ...");
      b.remainder = std::move(rem);
    }
    Token arrow = lex_.next();
    ReceiptKind kind;
    switch (arrow.kind) {
      case Tok::ArrowLin: kind = ReceiptKind::Linear; break;
      case Tok::ArrowRep: kind = ReceiptKind::Repeated; break;
      case Tok::ArrowPeek: kind = ReceiptKind::Peek; break;
      default: lex_.fail(arrow.span, "expected a binder arrow", {"<-", "<=", "<~"});
    }
    b.source = source(kind == ReceiptKind::Linear);
    return {std::move(b), kind};
  }

  AtomSource source(bool allow_postfix) {
    AtomSource s;
    Tok k = lex_.peek().kind;
    if (k == Tok::Underscore || k == Tok::Var || k == Tok::At) {
      s.name = name_pattern();
    } else {
      Term t = term();
      if (!t.is_atom()) lex_.fail(lex_.here(), "bind source must be a name or an atom");
      s.atom = std::move(t);
    }
    if (allow_postfix) {
      if (lex_.peek().kind == Tok::Interleave) {
        lex_.next();
        s.postfix = SourcePostfix::Interleave;
      } else if (lex_.peek().kind == Tok::SendRecv) {
        lex_.next();
        s.postfix = SourcePostfix::SendReceive;
        expect(Tok::LParen, "(");
        while (lex_.peek().kind != Tok::RParen) s.args.push_back(term());
        lex_.next();
      }
    }
    return s;
  }

  Lexer lex_;
};

// ---------------------------------------------------------------------------
// Printer

bool bare_printable(const std::string& s) {
  static const char* reserved[] = {"true", "false", "transform", "addAtom",
                                   "remAtom", "inf", "nan"};
  for (const char* r : reserved)
    if (s == r) return false;
  if (s.empty()) return false;
  char c0 = s[0];
  if (!((c0 >= 'a' && c0 <= 'z') || (c0 >= 'A' && c0 <= 'Z'))) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void print_quoted_string(const std::string& s, std::string& out) {
  static const char* hexd = "0123456789abcdef";
  out.push_back('"');
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (u < 0x20 || u == 0x7f) {
          out += "\\x";
          out.push_back(hexd[u >> 4]);
          out.push_back(hexd[u & 0xf]);
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void print_float(double f, std::string& out) {
  if (std::isnan(f)) {
    out += "nan";
    return;
  }
  if (std::isinf(f)) {
    out += f < 0 ? "-inf" : "inf";
    return;
  }
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), f);
  std::string s(buf, p);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find('E') == std::string::npos)
    s += ".0";
  out += s;
}

void print_ground(const GroundValue& g, std::string& out) {
  switch (g.kind) {
    case GroundKind::Bool: out += g.b ? "true" : "false"; break;
    case GroundKind::Int: out += std::to_string(g.i); break;
    case GroundKind::UInt: out += std::to_string(g.u) + "u"; break;
    case GroundKind::Float: print_float(g.f, out); break;
    case GroundKind::Str:
      if (bare_printable(g.s)) out += g.s;
      else print_quoted_string(g.s, out);
      break;
    case GroundKind::Uri: {
      out.push_back('`');
      for (char c : g.s) {
        if (c == '`' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('`');
      break;
    }
  }
}

const char* builtin_text(BuiltinSym b) {
  switch (b) {
    case BuiltinSym::DefEq: return "::=";
    case BuiltinSym::Eq: return "=";
    case BuiltinSym::Transform: return "transform";
    case BuiltinSym::AddAtom: return "addAtom";
    case BuiltinSym::RemAtom: return "remAtom";
    case BuiltinSym::Plus: return "+";
    case BuiltinSym::Times: return "*";
  }
  return "?";
}

void print_rec(const Term& t, std::string& out);

void print_name(const NamePattern& n, std::string& out) {
  switch (n.kind) {
    case NamePatternKind::Wildcard: out += "_"; break;
    case NamePatternKind::Var: out += "$" + n.var; break;
    case NamePatternKind::Quoted:
      out += "@";
      print_rec(*n.quoted, out);
      break;
  }
}

void print_receipts(const std::vector<Receipt>& receipts, std::string& out) {
  bool first_r = true;
  for (const auto& r : receipts) {
    if (!first_r) out += "; ";
    first_r = false;
    const char* arrow = r.kind == ReceiptKind::Linear ? "<-"
                        : r.kind == ReceiptKind::Repeated ? "<="
                                                          : "<~";
    bool first_b = true;
    for (const auto& b : r.binds) {
      if (!first_b) out += " & ";
      first_b = false;
      bool first_n = true;
      for (const auto& n : b.names) {
        if (!first_n) out += ", ";
        first_n = false;
        print_name(n, out);
      }
      if (b.remainder) {
        if (!b.names.empty()) out += " ";
        out += "...";
        if (b.remainder->quoted) out += " @";
        else out += " ";
        out += b.remainder->var == "_" ? "_" : "$" + b.remainder->var;
      }
      if (!b.names.empty() || b.remainder) out += " ";
      out += arrow;
      out += " ";
      if (b.source.name) print_name(*b.source.name, out);
      else print_rec(*b.source.atom, out);
      if (b.source.postfix == SourcePostfix::Interleave) out += "?!";
      if (b.source.postfix == SourcePostfix::SendReceive) {
        out += "!?(";
        bool first_a = true;
        for (const auto& a : b.source.args) {
          if (!first_a) out += " ";
          first_a = false;
          print_rec(a, out);
        }
        out += ")";
      }
    }
  }
}

void print_rec(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::UnitList: out += "()"; break;
    case TermKind::UnitBag: out += "{}"; break;
    case TermKind::Atom: {
      const AtomValue& a = t.atom_value();
      switch (a.kind) {
        case AtomKind::Ground: print_ground(a.ground, out); break;
        case AtomKind::Builtin: out += builtin_text(a.builtin); break;
        case AtomKind::Var: out += "$" + a.var; break;
        case AtomKind::Wildcard: out += "_"; break;
      }
      break;
    }
    case TermKind::List:
    case TermKind::Bag: {
      out += t.kind() == TermKind::List ? "(" : "{";
      bool first = true;
      for (const auto& it : t.items()) {
        if (!first) out += " ";
        first = false;
        print_rec(it, out);
      }
      out += t.kind() == TermKind::List ? ")" : "}";
      break;
    }
    case TermKind::ListComp:
    case TermKind::BagComp: {
      out += t.kind() == TermKind::ListComp ? "(" : "{";
      print_rec(t.comp_head(), out);
      out += " | ";
      print_receipts(t.comp_receipts(), out);
      out += " .";
      for (const auto& b : t.comp_body()) {
        out += " ";
        print_rec(b, out);
      }
      out += t.kind() == TermKind::ListComp ? ")" : "}";
      break;
    }
  }
}

ParseError from_fail(LexFail&& f) { return std::move(f.err); }

}  // namespace

std::string ParseError::render() const {
  std::ostringstream os;
  os << "parse error at line " << (span.line + 1) << ", column " << (span.column + 1) << ": "
     << message;
  if (!expected.empty()) {
    os << " (expected";
    for (const auto& e : expected) os << " " << e;
    os << ")";
  }
  return os.str();
}

ParseResult<Term> parse_term(const std::string& src) {
  try {
    Parser p(src);
    Term t = p.term();
    p.expect_end();
    return {t, std::nullopt};
  } catch (LexFail& f) {
    return {std::nullopt, from_fail(std::move(f))};
  }
}

ParseResult<std::vector<Term>> parse_terms(const std::string& src) {
  try {
    Parser p(src);
    return {p.terms_until_end(), std::nullopt};
  } catch (LexFail& f) {
    return {std::nullopt, from_fail(std::move(f))};
  }
}

ParseResult<AnyState> parse_state(const std::string& src) {
  try {
    Parser p(src);
    return {p.state(), std::nullopt};
  } catch (LexFail& f) {
    return {std::nullopt, from_fail(std::move(f))};
  }
}

std::string print_term(const Term& t) {
  std::string out;
  print_rec(t, out);
  return out;
}

std::string print_bag(const TermBag& bag) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : bag.items()) {
    if (!first) out += " ";
    first = false;
    print_rec(t, out);
  }
  out += "}";
  return out;
}

std::string print_term_multiset(const std::vector<Term>& sorted_terms) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : sorted_terms) {
    if (!first) out += " ";
    first = false;
    print_rec(t, out);
  }
  out += "}";
  return out;
}

std::string print_signed_term(const SignedTerm& st) {
  static const char* hexd = "0123456789abcdef";
  std::string out = print_term(st.term);
  out += " ^ (kid:0x" + st.key.hex() + " ";
  out += st.eo ? std::to_string(*st.eo) : "_";
  out += " ";
  for (unsigned char c : st.tag) {
    out.push_back(hexd[c >> 4]);
    out.push_back(hexd[c & 0xf]);
  }
  out += ")";
  return out;
}

std::string print_state(const State& s) {
  std::string out;
  out += "i: " + print_bag(s.i) + "\n";
  out += "k: " + print_bag(s.k) + "\n";
  out += "w: " + print_bag(s.w) + "\n";
  out += "o: " + print_bag(s.o) + "\n";
  return out;
}

static std::string print_signed_bag(const SignedBag& bag) {
  std::string out = "{";
  bool first = true;
  for (const auto& st : bag.items()) {
    if (!first) out += " ";
    first = false;
    out += print_signed_term(st);
  }
  out += "}";
  return out;
}

std::string print_state(const RState& s) {
  std::string out;
  out += "i: " + print_signed_bag(s.i) + "\n";
  out += "k: " + print_signed_bag(s.k) + "\n";
  out += "w: " + print_signed_bag(s.w) + "\n";
  out += "o: " + print_signed_bag(s.o) + "\n";
  out += "eos: {";
  bool first = true;
  for (const auto& [kid, eo] : s.eos) {
    if (!first) out += " ";
    first = false;
    out += "(kid:0x" + kid.hex() + " " + std::to_string(eo) + ")";
  }
  out += "}\n";
  return out;
}

std::string print_state(const AnyState& s) {
  if (std::holds_alternative<State>(s)) return print_state(std::get<State>(s));
  return print_state(std::get<RState>(s));
}

std::string print_context(const Context& k) {
  std::string out;
  size_t idx = 0;
  std::function<void()> render = [&]() {
    if (idx == k.path().size()) {
      out += "□";
      return;
    }
    const ContextStep& step = k.path()[idx++];
    if (step.kind == TermKind::List) {
      out += "(";
      bool first = true;
      for (const auto& t : step.left) {
        if (!first) out += " ";
        first = false;
        print_rec(t, out);
      }
      if (!first) out += " ";
      render();
      for (const auto& t : step.right) {
        out += " ";
        print_rec(t, out);
      }
      out += ")";
    } else {
      out += "{";
      bool first = true;
      for (const auto& t : step.siblings.items()) {
        if (!first) out += " ";
        first = false;
        print_rec(t, out);
      }
      if (!first) out += " ";
      render();
      out += "}";
    }
  };
  render();
  return out;
}

}  // namespace metta
