// Hand-rolled lexer and recursive-descent parser for the OpenQASM 2.0 subset.
// Gate names are accepted generically (arity follows from usage), comments are
// kept as statements, and the nonstandard bare "barrier;" form is allowed.

#include "qpart/qasm.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <utility>

namespace qpart::qasm {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

bool is_identifier(std::string_view s) {
    if (s.empty() || !is_ident_start(s[0])) return false;
    for (char c : s)
        if (!is_ident_char(c)) return false;
    return true;
}

// Decimal literal with a '.' or an exponent, optional sign. Plain integers are
// deliberately excluded; they stay uninterpreted expressions.
bool is_float_literal(std::string_view s) {
    std::size_t i = 0;
    const std::size_t n = s.size();
    if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t int_digits = 0;
    while (i < n && is_digit(s[i])) ++i, ++int_digits;
    bool has_dot = false;
    std::size_t frac_digits = 0;
    if (i < n && s[i] == '.') {
        has_dot = true;
        ++i;
        while (i < n && is_digit(s[i])) ++i, ++frac_digits;
    }
    if (int_digits + frac_digits == 0) return false;
    bool has_exp = false;
    if (i < n && (s[i] == 'e' || s[i] == 'E')) {
        has_exp = true;
        ++i;
        if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < n && is_digit(s[i])) ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    return i == n && (has_dot || has_exp);
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

struct Token {
    enum Kind { Ident, Number, String, Punct, Comment, End };
    Kind kind = End;
    std::string text;
    SourcePos pos;
    std::size_t offset = 0;  // byte offset of the first character
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { tokenize(); }
    const std::vector<Token>& tokens() const { return tokens_; }
    std::string_view source() const { return src_; }

private:
    void tokenize() {
        std::size_t i = 0;
        int line = 1;
        int col = 1;
        const std::size_t n = src_.size();
        auto push = [&](Token::Kind k, std::size_t begin, std::size_t end, int l, int c) {
            tokens_.push_back({k, std::string(src_.substr(begin, end - begin)), {l, c}, begin});
        };
        while (i < n) {
            char ch = src_[i];
            if (ch == '\n') {
                ++i;
                ++line;
                col = 1;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++i;
                ++col;
                continue;
            }
            const int tl = line;
            const int tc = col;
            if (ch == '/' && i + 1 < n && src_[i + 1] == '/') {
                std::size_t begin = i;
                while (i < n && src_[i] != '\n') ++i, ++col;
                push(Token::Comment, begin, i, tl, tc);
                continue;
            }
            if (is_ident_start(ch)) {
                std::size_t begin = i;
                while (i < n && is_ident_char(src_[i])) ++i, ++col;
                push(Token::Ident, begin, i, tl, tc);
                continue;
            }
            if (is_digit(ch) || (ch == '.' && i + 1 < n && is_digit(src_[i + 1]))) {
                std::size_t begin = i;
                while (i < n && (is_digit(src_[i]) || src_[i] == '.')) ++i, ++col;
                if (i < n && (src_[i] == 'e' || src_[i] == 'E')) {
                    ++i, ++col;
                    if (i < n && (src_[i] == '+' || src_[i] == '-')) ++i, ++col;
                    while (i < n && is_digit(src_[i])) ++i, ++col;
                }
                push(Token::Number, begin, i, tl, tc);
                continue;
            }
            if (ch == '"') {
                std::size_t begin = i;
                ++i, ++col;
                while (i < n && src_[i] != '"' && src_[i] != '\n') ++i, ++col;
                if (i >= n || src_[i] != '"')
                    throw ParseError("unterminated string literal", {tl, tc});
                ++i, ++col;
                push(Token::String, begin, i, tl, tc);
                continue;
            }
            if (ch == '-' && i + 1 < n && src_[i + 1] == '>') {
                push(Token::Punct, i, i + 2, tl, tc);
                i += 2;
                col += 2;
                continue;
            }
            static const std::string punct = ";,()[]{}+-*/^=";
            if (punct.find(ch) != std::string::npos) {
                push(Token::Punct, i, i + 1, tl, tc);
                ++i, ++col;
                continue;
            }
            throw ParseError(std::string("unexpected character '") + ch + "'", {tl, tc});
        }
        tokens_.push_back({Token::End, "", {line, col}, n});
    }

    std::string_view src_;
    std::vector<Token> tokens_;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) {}

    QasmProgram run() {
        QasmProgram prog;
        while (true) {
            flush_comments(prog);
            const Token& t = peek();
            if (t.kind == Token::End) break;
            if (t.kind == Token::Ident) {
                if (t.text == "OPENQASM") {
                    parse_version(prog);
                } else if (t.text == "include") {
                    parse_include(prog);
                } else if (t.text == "qreg" || t.text == "creg") {
                    parse_register(prog, t.text == "qreg");
                } else if (t.text == "barrier") {
                    parse_barrier(prog);
                } else if (t.text == "measure") {
                    parse_measure(prog);
                } else if (t.text == "gate") {
                    parse_gate_decl(prog);
                } else if (t.text == "opaque") {
                    parse_opaque_decl(prog);
                } else if (t.text == "reset") {
                    throw ParseError("reset statements are not supported", t.pos);
                } else if (t.text == "if") {
                    throw ParseError("classical control flow is not supported", t.pos);
                } else {
                    parse_gate_op(prog);
                }
            } else {
                throw ParseError("expected a statement, found '" + t.text + "'", t.pos);
            }
        }
        flush_comments(prog);
        return prog;
    }

private:
    // Statement-level comment handling: comment tokens encountered while
    // advancing are queued and emitted at the next statement boundary.
    const Token& peek() {
        while (lexer_.tokens()[pos_].kind == Token::Comment)
            pending_comments_.push_back(lexer_.tokens()[pos_++].text);
        return lexer_.tokens()[pos_];
    }

    Token next() {
        const Token& t = peek();
        if (t.kind != Token::End) ++pos_;
        return t;
    }

    void flush_comments(QasmProgram& prog) {
        peek();
        for (auto& c : pending_comments_) prog.statements.push_back(CommentStmt{std::move(c)});
        pending_comments_.clear();
    }

    Token expect_punct(const std::string& text) {
        Token t = next();
        if (t.kind != Token::Punct || t.text != text)
            throw ParseError("expected '" + text + "', found '" + t.text + "'", t.pos);
        return t;
    }

    Token expect_ident() {
        Token t = next();
        if (t.kind != Token::Ident)
            throw ParseError("expected an identifier, found '" + t.text + "'", t.pos);
        return t;
    }

    int expect_uint() {
        Token t = next();
        if (t.kind != Token::Number || t.text.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("expected a non-negative integer, found '" + t.text + "'", t.pos);
        return std::stoi(t.text);
    }

    bool peek_punct(const std::string& text) {
        const Token& t = peek();
        return t.kind == Token::Punct && t.text == text;
    }

    void parse_version(QasmProgram& prog) {
        Token kw = next();
        if (!prog.version.empty())
            throw ParseError("duplicate OPENQASM line", kw.pos);
        Token v = next();
        if (v.kind != Token::Number)
            throw ParseError("expected a version number after OPENQASM", v.pos);
        prog.version = v.text;
        expect_punct(";");
    }

    void parse_include(QasmProgram& prog) {
        next();
        Token s = next();
        if (s.kind != Token::String)
            throw ParseError("expected a quoted file name after include", s.pos);
        prog.includes.push_back(s.text.substr(1, s.text.size() - 2));
        expect_punct(";");
    }

    void parse_register(QasmProgram& prog, bool quantum) {
        next();
        Token name = expect_ident();
        expect_punct("[");
        int size = expect_uint();
        expect_punct("]");
        expect_punct(";");
        if (size <= 0)
            throw ParseError("register '" + name.text + "' must have positive size", name.pos);
        auto& table = quantum ? qreg_sizes_ : creg_sizes_;
        if (table.count(name.text))
            throw ParseError("duplicate register '" + name.text + "'", name.pos);
        table[name.text] = size;
        auto& list = quantum ? prog.qregs : prog.cregs;
        list.push_back({name.text, size});
    }

    // Operand of the form reg or reg[idx]; validated against declared registers.
    struct Operand {
        std::string reg;
        std::optional<int> index;
        SourcePos pos;
    };

    Operand parse_operand(const std::map<std::string, int>& table, const char* kind) {
        Token name = expect_ident();
        auto it = table.find(name.text);
        if (it == table.end())
            throw ParseError(std::string("undeclared ") + kind + " register '" + name.text + "'",
                             name.pos);
        Operand op{name.text, std::nullopt, name.pos};
        if (peek_punct("[")) {
            next();
            Token idx_tok = peek();
            int idx = expect_uint();
            expect_punct("]");
            if (idx >= it->second)
                throw ParseError("index " + std::to_string(idx) + " out of range for register '" +
                                     name.text + "[" + std::to_string(it->second) + "]'",
                                 idx_tok.pos);
            op.index = idx;
        }
        return op;
    }

    void parse_barrier(QasmProgram& prog) {
        next();
        BarrierStmt st;
        if (!peek_punct(";")) {
            while (true) {
                Operand op = parse_operand(qreg_sizes_, "quantum");
                if (op.index) {
                    st.qubits.push_back({op.reg, *op.index});
                } else {
                    for (int i = 0; i < qreg_sizes_[op.reg]; ++i)
                        st.qubits.push_back({op.reg, i});
                }
                if (peek_punct(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expect_punct(";");
        prog.statements.push_back(std::move(st));
    }

    void parse_measure(QasmProgram& prog) {
        next();
        Operand q = parse_operand(qreg_sizes_, "quantum");
        expect_punct("->");
        Operand c = parse_operand(creg_sizes_, "classical");
        expect_punct(";");
        prog.statements.push_back(MeasureStmt{q.reg, q.index, c.reg, c.index});
    }

    // Custom gate bodies are captured verbatim, from "gate" through the
    // matching '}'. Raw token scanning keeps embedded comments in the slice.
    void parse_gate_decl(QasmProgram& prog) {
        const auto& toks = lexer_.tokens();
        std::size_t begin = toks[pos_].offset;
        SourcePos start = toks[pos_].pos;
        std::size_t i = pos_;
        int depth = 0;
        bool seen_brace = false;
        std::size_t end = begin;
        for (; i < toks.size() && toks[i].kind != Token::End; ++i) {
            if (toks[i].kind == Token::Punct && toks[i].text == "{") {
                ++depth;
                seen_brace = true;
            } else if (toks[i].kind == Token::Punct && toks[i].text == "}") {
                --depth;
                if (depth == 0) {
                    end = toks[i].offset + 1;
                    ++i;
                    break;
                }
            }
        }
        if (!seen_brace || end == begin)
            throw ParseError("unterminated gate declaration", start);
        pos_ = i;
        prog.statements.push_back(
            RawDeclStmt{std::string(lexer_.source().substr(begin, end - begin))});
    }

    void parse_opaque_decl(QasmProgram& prog) {
        const auto& toks = lexer_.tokens();
        std::size_t begin = toks[pos_].offset;
        SourcePos start = toks[pos_].pos;
        std::size_t i = pos_;
        std::size_t end = begin;
        for (; i < toks.size() && toks[i].kind != Token::End; ++i) {
            if (toks[i].kind == Token::Punct && toks[i].text == ";") {
                end = toks[i].offset + 1;
                ++i;
                break;
            }
        }
        if (end == begin) throw ParseError("unterminated opaque declaration", start);
        pos_ = i;
        prog.statements.push_back(
            RawDeclStmt{std::string(lexer_.source().substr(begin, end - begin))});
    }

    std::vector<ParamExpr> parse_params() {
        std::vector<ParamExpr> params;
        Token open = expect_punct("(");
        const auto& toks = lexer_.tokens();
        int depth = 1;
        std::size_t slice_begin = open.offset + 1;
        while (true) {
            const Token& t = toks[pos_];
            if (t.kind == Token::End)
                throw ParseError("unterminated parameter list", open.pos);
            if (t.kind == Token::Punct && t.text == "(") ++depth;
            if (t.kind == Token::Punct && t.text == ")") {
                --depth;
                if (depth == 0) {
                    std::string text =
                        trim(lexer_.source().substr(slice_begin, t.offset - slice_begin));
                    if (text.empty())
                        throw ParseError("empty gate parameter", t.pos);
                    params.push_back(ParamExpr::of(std::move(text)));
                    ++pos_;
                    break;
                }
            }
            if (depth == 1 && t.kind == Token::Punct && t.text == ",") {
                std::string text =
                    trim(lexer_.source().substr(slice_begin, t.offset - slice_begin));
                if (text.empty())
                    throw ParseError("empty gate parameter", t.pos);
                params.push_back(ParamExpr::of(std::move(text)));
                slice_begin = t.offset + 1;
            }
            ++pos_;
        }
        return params;
    }

    void parse_gate_op(QasmProgram& prog) {
        Token name = expect_ident();
        GateStmt st;
        st.name = name.text;
        if (peek_punct("(")) st.params = parse_params();
        while (true) {
            Operand op = parse_operand(qreg_sizes_, "quantum");
            if (!op.index)
                throw ParseError("gate operand '" + op.reg + "' must use an explicit index",
                                 op.pos);
            QubitRef ref{op.reg, *op.index};
            for (const auto& seen : st.qubits)
                if (seen == ref)
                    throw ParseError("duplicate qubit operand '" + to_string(ref) + "'", op.pos);
            st.qubits.push_back(std::move(ref));
            if (peek_punct(",")) {
                next();
                continue;
            }
            break;
        }
        expect_punct(";");
        prog.statements.push_back(std::move(st));
    }

    Lexer lexer_;
    std::size_t pos_ = 0;
    std::vector<std::string> pending_comments_;
    std::map<std::string, int> qreg_sizes_;
    std::map<std::string, int> creg_sizes_;
};

struct StatementPrinter {
    std::ostringstream& out;

    void operator()(const GateStmt& g) const {
        out << g.name;
        if (!g.params.empty()) {
            out << '(';
            for (std::size_t i = 0; i < g.params.size(); ++i) {
                if (i) out << ',';
                out << g.params[i].text;
            }
            out << ')';
        }
        out << ' ';
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
            if (i) out << ',';
            out << to_string(g.qubits[i]);
        }
        out << ";\n";
    }

    void operator()(const BarrierStmt& b) const {
        out << "barrier";
        for (std::size_t i = 0; i < b.qubits.size(); ++i)
            out << (i ? "," : " ") << to_string(b.qubits[i]);
        out << ";\n";
    }

    void operator()(const MeasureStmt& m) const {
        out << "measure " << m.qreg;
        if (m.qindex) out << '[' << *m.qindex << ']';
        out << " -> " << m.creg;
        if (m.cindex) out << '[' << *m.cindex << ']';
        out << ";\n";
    }

    void operator()(const CommentStmt& c) const { out << c.text << '\n'; }
    void operator()(const RawDeclStmt& d) const { out << d.text << '\n'; }
};

}  // namespace

ParseError::ParseError(const std::string& message, SourcePos pos)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " +
                         message),
      pos_(pos) {}

ParamExpr ParamExpr::of(std::string text) {
    ParamKind kind = ParamKind::Expr;
    if (is_float_literal(text))
        kind = ParamKind::FloatLiteral;
    else if (is_identifier(text) && text != "pi")
        kind = ParamKind::Symbol;
    return {kind, std::move(text)};
}

int QasmProgram::qubit_count() const {
    int total = 0;
    for (const auto& r : qregs) total += r.size;
    return total;
}

QasmProgram parse(std::string_view text) { return Parser(text).run(); }

std::string serialize(const QasmProgram& program) {
    std::ostringstream out;
    if (!program.version.empty()) out << "OPENQASM " << program.version << ";\n";
    for (const auto& inc : program.includes) out << "include \"" << inc << "\";\n";
    for (const auto& r : program.qregs) out << "qreg " << r.name << '[' << r.size << "];\n";
    for (const auto& r : program.cregs) out << "creg " << r.name << '[' << r.size << "];\n";
    StatementPrinter printer{out};
    for (const auto& st : program.statements) std::visit(printer, st);
    return out.str();
}

std::string to_string(const QubitRef& ref) {
    return ref.reg + "[" + std::to_string(ref.index) + "]";
}

}  // namespace qpart::qasm
