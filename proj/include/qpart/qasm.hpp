#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qpart::qasm {

/// Position in the source text, 1-based.
struct SourcePos {
    int line = 0;
    int col = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, SourcePos pos);
    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

/// Reference to a single qubit of a declared quantum register.
struct QubitRef {
    std::string reg;
    int index = 0;
    bool operator==(const QubitRef&) const = default;
};

enum class ParamKind { FloatLiteral, Symbol, Expr };

/// Gate parameter. The source text is preserved byte for byte; a parameter is
/// never evaluated numerically by the parser.
struct ParamExpr {
    ParamKind kind = ParamKind::Expr;
    std::string text;
    bool operator==(const ParamExpr&) const = default;

    /// Classifies trimmed source text. Decimal literals (a '.' or an exponent
    /// is required) become FloatLiteral, identifiers other than "pi" become
    /// Symbol, everything else stays an uninterpreted Expr.
    static ParamExpr of(std::string text);
};

struct GateStmt {
    std::string name;
    std::vector<ParamExpr> params;
    std::vector<QubitRef> qubits;
    bool operator==(const GateStmt&) const = default;
};

/// An empty qubit list denotes the bare "barrier;" form, which spans every
/// qubit of the program. Whole-register operands are expanded at parse time.
struct BarrierStmt {
    std::vector<QubitRef> qubits;
    bool operator==(const BarrierStmt&) const = default;
};

/// Indexed or whole-register measurement. Parsed and round-tripped but never
/// scheduled.
struct MeasureStmt {
    std::string qreg;
    std::optional<int> qindex;
    std::string creg;
    std::optional<int> cindex;
    bool operator==(const MeasureStmt&) const = default;
};

struct CommentStmt {
    std::string text;  // includes the leading "//"
    bool operator==(const CommentStmt&) const = default;
};

/// Custom gate or opaque declaration, kept verbatim and never interpreted.
/// Invocations of a declared gate parse as ordinary GateStmt.
struct RawDeclStmt {
    std::string text;
    bool operator==(const RawDeclStmt&) const = default;
};

using Statement = std::variant<GateStmt, BarrierStmt, MeasureStmt, CommentStmt, RawDeclStmt>;

struct RegisterDecl {
    std::string name;
    int size = 0;
    bool operator==(const RegisterDecl&) const = default;
};

struct QasmProgram {
    std::string version;  // empty when the input had no OPENQASM line
    std::vector<std::string> includes;
    std::vector<RegisterDecl> qregs;
    std::vector<RegisterDecl> cregs;
    std::vector<Statement> statements;

    int qubit_count() const;
    bool operator==(const QasmProgram&) const = default;
};

/// Parses the OpenQASM 2.0 subset used throughout the toolkit. Every qubit
/// operand is validated against the registers declared so far; violations
/// raise ParseError with the offending line and column.
QasmProgram parse(std::string_view text);

/// One statement per line, deterministic byte output. serialize(parse(t))
/// parses back to a structurally equal program.
std::string serialize(const QasmProgram& program);

std::string to_string(const QubitRef& ref);

}  // namespace qpart::qasm
