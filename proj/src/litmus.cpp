#include "hsamm/litmus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "hsamm/errors.hpp"

namespace hsamm {

namespace {

enum class Tok {
  kIdent,
  kInt,
  kString,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kEq,
  kSemi,
  kColon,
  kHash,
  kTilde,
  kAnd,
  kOr,
  kEnd,
};

std::string_view TokName(Tok t) {
  switch (t) {
    case Tok::kIdent:
      return "identifier";
    case Tok::kInt:
      return "integer";
    case Tok::kString:
      return "string";
    case Tok::kLBrace:
      return "'{'";
    case Tok::kRBrace:
      return "'}'";
    case Tok::kLParen:
      return "'('";
    case Tok::kRParen:
      return "')'";
    case Tok::kEq:
      return "'='";
    case Tok::kSemi:
      return "';'";
    case Tok::kColon:
      return "':'";
    case Tok::kHash:
      return "'#'";
    case Tok::kTilde:
      return "'~'";
    case Tok::kAnd:
      return "'/\\'";
    case Tok::kOr:
      return "'\\/'";
    case Tok::kEnd:
      return "end of input";
  }
  return "?";
}

struct Token {
  Tok type = Tok::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// '#' directly followed by a digit is the value sigil of a store ("#1");
// any other '#' starts a comment that runs to the end of the line.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      SkipSpace();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_' || src_[pos_] == '.')) {
          Advance();
        }
        t.type = Tok::kIdent;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          Advance();
        }
        t.type = Tok::kInt;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (c == '"') {
        Advance();
        t.type = Tok::kString;
        for (;;) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') {
            throw ParseError(t.line, t.column, "unterminated string");
          }
          char d = src_[pos_];
          Advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) {
              throw ParseError(t.line, t.column, "unterminated string");
            }
            d = src_[pos_];
            Advance();
          }
          t.text += d;
        }
      } else if (c == '/' && Peek(1) == '\\') {
        Advance();
        Advance();
        t.type = Tok::kAnd;
      } else if (c == '\\' && Peek(1) == '/') {
        Advance();
        Advance();
        t.type = Tok::kOr;
      } else {
        switch (c) {
          case '{':
            t.type = Tok::kLBrace;
            break;
          case '}':
            t.type = Tok::kRBrace;
            break;
          case '(':
            t.type = Tok::kLParen;
            break;
          case ')':
            t.type = Tok::kRParen;
            break;
          case '=':
            t.type = Tok::kEq;
            break;
          case ';':
            t.type = Tok::kSemi;
            break;
          case ':':
            t.type = Tok::kColon;
            break;
          case '#':
            t.type = Tok::kHash;
            break;
          case '~':
            t.type = Tok::kTilde;
            break;
          default:
            throw ParseError(t.line, t.column,
                             std::string("unexpected character '") + c + "'");
        }
        Advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char Peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void Advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void SkipSpace() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (c == '#' &&
                 !std::isdigit(static_cast<unsigned char>(Peek(1)))) {
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct RawInstr {
  Token id;
  InstrKind kind;
  Token address;
  Token reg;
  Value value = 0;
};

struct RawMaster {
  Token name;
  std::vector<RawInstr> instrs;
};

struct RawTest {
  std::string name;
  std::vector<std::pair<Token, Value>> init;
  std::vector<RawMaster> masters;
  OutcomeMode mode = OutcomeMode::kForbidden;
  OutcomePredicate outcome;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RawTest Test() {
    RawTest t;
    Keyword("litmus");
    t.name = Expect(Tok::kString).text;
    if (IsKeyword("init")) {
      Next();
      Expect(Tok::kLBrace);
      while (!At(Tok::kRBrace)) {
        Token addr = Expect(Tok::kIdent);
        Expect(Tok::kEq);
        Value v = ValueLiteral();
        Expect(Tok::kSemi);
        t.init.emplace_back(std::move(addr), v);
      }
      Expect(Tok::kRBrace);
    }
    while (IsKeyword("master")) t.masters.push_back(Master());
    if (t.masters.empty()) Error(Cur(), "expected 'master'");
    if (IsKeyword("forbidden")) {
      t.mode = OutcomeMode::kForbidden;
    } else if (IsKeyword("required")) {
      t.mode = OutcomeMode::kRequired;
    } else if (IsKeyword("allowed")) {
      t.mode = OutcomeMode::kAllowed;
    } else {
      Error(Cur(), "expected 'forbidden', 'required' or 'allowed'");
    }
    Next();
    t.outcome = Expr();
    Expect(Tok::kEnd);
    return t;
  }

  OutcomePredicate ExprOnly() {
    auto e = Expr();
    Expect(Tok::kEnd);
    return e;
  }

 private:
  RawMaster Master() {
    RawMaster m;
    Next();  // master
    m.name = Expect(Tok::kIdent);
    Expect(Tok::kLBrace);
    while (!At(Tok::kRBrace)) {
      RawInstr ins;
      ins.id = Expect(Tok::kIdent);
      Expect(Tok::kColon);
      Token op = Expect(Tok::kIdent);
      auto kind = KindFromMnemonic(op.text);
      if (!kind) Error(op, "unknown instruction '" + op.text + "'");
      ins.kind = *kind;
      switch (*kind) {
        case InstrKind::kStore:
        case InstrKind::kScRelStore:
          ins.address = Expect(Tok::kIdent);
          Expect(Tok::kHash);
          ins.value = ValueLiteral();
          break;
        case InstrKind::kLoad:
        case InstrKind::kScAcqLoad:
          ins.reg = Expect(Tok::kIdent);
          ins.address = Expect(Tok::kIdent);
          break;
        case InstrKind::kFence:
          break;
      }
      Expect(Tok::kSemi);
      m.instrs.push_back(std::move(ins));
    }
    Expect(Tok::kRBrace);
    return m;
  }

  OutcomePredicate Expr() {
    auto lhs = Conj();
    while (At(Tok::kOr)) {
      Next();
      lhs = OutcomePredicate::Or(std::move(lhs), Conj());
    }
    return lhs;
  }

  OutcomePredicate Conj() {
    auto lhs = Unary();
    while (At(Tok::kAnd)) {
      Next();
      lhs = OutcomePredicate::And(std::move(lhs), Unary());
    }
    return lhs;
  }

  OutcomePredicate Unary() {
    if (At(Tok::kTilde)) {
      Next();
      return OutcomePredicate::Not(Unary());
    }
    if (At(Tok::kLParen)) {
      Next();
      auto e = Expr();
      Expect(Tok::kRParen);
      return e;
    }
    OutcomeAtom a;
    Token master = Expect(Tok::kIdent);
    a.line = master.line;
    a.column = master.column;
    a.master = master.text;
    Expect(Tok::kColon);
    a.reg = Expect(Tok::kIdent).text;
    Expect(Tok::kEq);
    a.value = ValueLiteral();
    return OutcomePredicate::Atom(std::move(a));
  }

  // INT, or V<n> for logic values.
  Value ValueLiteral() {
    const Token& t = Cur();
    std::string_view digits;
    if (t.type == Tok::kInt) {
      digits = t.text;
    } else if (t.type == Tok::kIdent && t.text.size() > 1 && t.text[0] == 'V' &&
               std::all_of(t.text.begin() + 1, t.text.end(), [](char c) {
                 return std::isdigit(static_cast<unsigned char>(c));
               })) {
      digits = std::string_view(t.text).substr(1);
    } else {
      Error(t, "expected value, found " + std::string(TokName(t.type)));
    }
    Value v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size()) {
      Error(t, "value out of range");
    }
    Next();
    return v;
  }

  const Token& Cur() const { return toks_[pos_]; }
  bool At(Tok t) const { return Cur().type == t; }
  bool IsKeyword(std::string_view kw) const {
    return At(Tok::kIdent) && Cur().text == kw;
  }
  void Next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  void Keyword(std::string_view kw) {
    if (!IsKeyword(kw)) Error(Cur(), "expected '" + std::string(kw) + "'");
    Next();
  }
  Token Expect(Tok t) {
    if (!At(t)) {
      Error(Cur(), "expected " + std::string(TokName(t)) + ", found " +
                       std::string(TokName(Cur().type)) +
                       (Cur().text.empty() ? "" : " '" + Cur().text + "'"));
    }
    Token out = Cur();
    Next();
    return out;
  }
  [[noreturn]] void Error(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, msg);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void ResolveOutcome(OutcomePredicate& p, const SystemConfig& c,
                    std::vector<Diagnostic>& diags) {
  if (p.op != OutcomePredicate::Op::kAtom) {
    for (auto& q : p.operands) ResolveOutcome(q, c, diags);
    return;
  }
  auto& a = p.atom;
  auto m = c.FindMaster(a.master);
  auto r = c.FindRegister(a.reg);
  if (!m) diags.push_back({a.line, a.column, "undeclared master " + a.master});
  if (!r) diags.push_back({a.line, a.column, "undeclared register " + a.reg});
  if (!std::binary_search(c.values.begin(), c.values.end(), a.value)) {
    diags.push_back({a.line, a.column,
                     "value " + std::to_string(a.value) +
                         " is outside the value domain"});
  }
  a.m = m.value_or(0);
  a.r = r.value_or(0);
}

LitmusTest Lower(RawTest raw) {
  std::vector<Diagnostic> diags;
  LitmusTest t;
  t.name = raw.name;
  t.mode = raw.mode;
  SystemConfig& c = t.config;

  std::set<Value> values = {0};
  std::map<std::string, Value> init;
  for (const auto& [tok, v] : raw.init) {
    if (!init.emplace(tok.text, v).second) {
      diags.push_back({tok.line, tok.column,
                       "duplicate initial value for " + tok.text});
      continue;
    }
    c.addresses.push_back(tok.text);
    values.insert(v);
  }
  auto address_of = [&](const std::string& name) {
    if (auto a = c.FindAddress(name)) return *a;
    c.addresses.push_back(name);
    return static_cast<AddrIndex>(c.addresses.size() - 1);
  };
  auto register_of = [&](const std::string& name) {
    if (auto r = c.FindRegister(name)) return *r;
    c.registers.push_back(name);
    return static_cast<RegIndex>(c.registers.size() - 1);
  };

  std::set<std::string> ids;
  for (const auto& rm : raw.masters) {
    if (c.FindMaster(rm.name.text)) {
      diags.push_back({rm.name.line, rm.name.column,
                       "duplicate master " + rm.name.text});
      continue;
    }
    const auto m = static_cast<MasterIndex>(c.masters.size());
    c.masters.push_back(rm.name.text);
    c.programs.emplace_back();
    for (const auto& ri : rm.instrs) {
      if (!ids.insert(ri.id.text).second) {
        diags.push_back({ri.id.line, ri.id.column,
                         "duplicate instruction id " + ri.id.text});
        continue;
      }
      Instruction ins;
      ins.id = ri.id.text;
      ins.kind = ri.kind;
      ins.issuer = m;
      ins.index = static_cast<std::uint32_t>(c.programs[m].size() + 1);
      if (IsMemAccess(ri.kind)) ins.address = address_of(ri.address.text);
      if (IsStore(ri.kind)) {
        ins.value = ri.value;
        values.insert(ri.value);
      }
      if (IsLoad(ri.kind)) ins.reg = register_of(ri.reg.text);
      c.programs[m].push_back(static_cast<InstrIndex>(c.instructions.size()));
      c.instructions.push_back(std::move(ins));
    }
  }
  for (const auto& name : c.addresses) {
    auto it = init.find(name);
    c.initial_memory.push_back(it == init.end() ? 0 : it->second);
  }
  c.values.assign(values.begin(), values.end());
  if (c.masters.size() > kMaxMasters) {
    diags.push_back({1, 1, "more than " + std::to_string(kMaxMasters) +
                               " masters"});
  }
  if (c.instructions.size() > kMaxInstructions) {
    diags.push_back({1, 1, "more than " + std::to_string(kMaxInstructions) +
                               " instructions"});
  }

  t.outcome = std::move(raw.outcome);
  ResolveOutcome(t.outcome, c, diags);
  if (!diags.empty()) throw ValidationError(std::move(diags));
  t.watched_loads = AllLoads(c);
  return t;
}

int Precedence(OutcomePredicate::Op op) {
  switch (op) {
    case OutcomePredicate::Op::kOr:
      return 1;
    case OutcomePredicate::Op::kAnd:
      return 2;
    case OutcomePredicate::Op::kNot:
      return 3;
    case OutcomePredicate::Op::kAtom:
      return 4;
  }
  return 0;
}

void PrintOutcome(const OutcomePredicate& p, int min_prec, std::ostream& os) {
  const int prec = Precedence(p.op);
  const bool parens = prec < min_prec;
  if (parens) os << "( ";
  switch (p.op) {
    case OutcomePredicate::Op::kAtom:
      os << p.atom.master << ":" << p.atom.reg << " = " << p.atom.value;
      break;
    case OutcomePredicate::Op::kNot:
      os << "~";
      PrintOutcome(p.operands[0], 3, os);
      break;
    case OutcomePredicate::Op::kAnd:
    case OutcomePredicate::Op::kOr:
      PrintOutcome(p.operands[0], prec, os);
      os << (p.op == OutcomePredicate::Op::kAnd ? " /\\ " : " \\/ ");
      PrintOutcome(p.operands[1], prec + 1, os);
      break;
  }
  if (parens) os << " )";
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error([&] {
        std::ostringstream os;
        const char* sep = "";
        for (const auto& d : diagnostics) {
          os << sep << d.line << ":" << d.column << ": " << d.message;
          sep = "\n";
        }
        return os.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

OutcomePredicate OutcomePredicate::Atom(OutcomeAtom a) {
  OutcomePredicate p;
  p.op = Op::kAtom;
  p.atom = std::move(a);
  return p;
}

OutcomePredicate OutcomePredicate::Not(OutcomePredicate q) {
  OutcomePredicate p;
  p.op = Op::kNot;
  p.operands.push_back(std::move(q));
  return p;
}

OutcomePredicate OutcomePredicate::And(OutcomePredicate a, OutcomePredicate b) {
  OutcomePredicate p;
  p.op = Op::kAnd;
  p.operands.push_back(std::move(a));
  p.operands.push_back(std::move(b));
  return p;
}

OutcomePredicate OutcomePredicate::Or(OutcomePredicate a, OutcomePredicate b) {
  OutcomePredicate p;
  p.op = Op::kOr;
  p.operands.push_back(std::move(a));
  p.operands.push_back(std::move(b));
  return p;
}

bool OutcomePredicate::Evaluate(std::span<const Value> rf,
                                std::size_t reg_count) const {
  switch (op) {
    case Op::kAtom:
      return rf[atom.m * reg_count + atom.r] == atom.value;
    case Op::kNot:
      return !operands[0].Evaluate(rf, reg_count);
    case Op::kAnd:
      return operands[0].Evaluate(rf, reg_count) &&
             operands[1].Evaluate(rf, reg_count);
    case Op::kOr:
      return operands[0].Evaluate(rf, reg_count) ||
             operands[1].Evaluate(rf, reg_count);
  }
  return false;
}

std::string_view ModeName(OutcomeMode mode) {
  switch (mode) {
    case OutcomeMode::kForbidden:
      return "forbidden";
    case OutcomeMode::kRequired:
      return "required";
    case OutcomeMode::kAllowed:
      return "allowed";
  }
  return "?";
}

std::uint64_t AllLoads(const SystemConfig& config) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < config.instructions.size(); ++i) {
    if (IsLoad(config.instructions[i].kind)) {
      mask |= Bit(static_cast<std::uint32_t>(i));
    }
  }
  return mask;
}

LitmusTest Parse(std::string_view text) {
  Parser p(Lexer(text).Run());
  return Lower(p.Test());
}

OutcomePredicate ParseOutcome(std::string_view text,
                              const SystemConfig& config) {
  Parser p(Lexer(text).Run());
  OutcomePredicate out = p.ExprOnly();
  std::vector<Diagnostic> diags;
  ResolveOutcome(out, config, diags);
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return out;
}

std::string FormatOutcome(const OutcomePredicate& p) {
  std::ostringstream os;
  PrintOutcome(p, 0, os);
  return os.str();
}

std::string Format(const LitmusTest& test) {
  const SystemConfig& c = test.config;
  std::ostringstream os;
  os << "litmus " << Quote(test.name) << "\n";
  os << "init {";
  for (std::size_t a = 0; a < c.addresses.size(); ++a) {
    os << " " << c.addresses[a] << " = " << c.initial_memory[a] << ";";
  }
  os << " }\n";
  for (std::size_t m = 0; m < c.masters.size(); ++m) {
    os << "master " << c.masters[m] << " {";
    for (InstrIndex i : c.programs[m]) {
      const Instruction& ins = c.instr(i);
      os << " " << ins.id << ": " << Mnemonic(ins.kind);
      if (IsLoad(ins.kind)) {
        os << " " << c.registers[*ins.reg] << " " << c.addresses[*ins.address];
      } else if (IsStore(ins.kind)) {
        os << " " << c.addresses[*ins.address] << " #" << *ins.value;
      }
      os << ";";
    }
    os << " }\n";
  }
  os << ModeName(test.mode) << " ( " << FormatOutcome(test.outcome) << " )\n";
  return os.str();
}

}  // namespace hsamm
