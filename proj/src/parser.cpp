#include "lambdap/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <set>

namespace lambdap {

namespace {

enum class Tok {
    Ident,
    Op,
    Int,
    Float,
    String,
    Backslash,
    Dot,
    Colon,
    Semi,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LArrow,
    RArrow,
    MapsTo,
    Bar,
    Equals,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier/operator name, or decoded string literal
    std::uint64_t intValue = 0;
    double floatValue = 0;
    SourcePos pos;
    std::size_t begin = 0;
    std::size_t end = 0;
    bool boundary = false;  // starts a new top-level item
};

constexpr std::array kKeywords = {"for",  "handle", "handler", "perform", "return", "traverse", "if",    "then",
                                  "else", "case",   "of",      "true",    "false",  "Left",     "Right"};

bool isKeyword(const std::string& s) {
    return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End: return "end of item";
    case Tok::String: return "string literal";
    case Tok::Int:
    case Tok::Float: return "number";
    case Tok::Ident: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipSpaceAndComments();
            Token t;
            t.pos = {line_, col_};
            t.begin = i_;
            if (i_ >= src_.size()) {
                t.kind = Tok::End;
                t.end = i_;
                out.push_back(t);
                break;
            }
            char c = src_[i_];
            if (isIdentStart(c)) {
                while (i_ < src_.size() && isIdentChar(src_[i_])) advance();
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(t.begin, i_ - t.begin));
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lexNumber(t);
            } else if (c == '"') {
                lexString(t);
            } else if (isOperatorChar(c)) {
                while (i_ < src_.size() && isOperatorChar(src_[i_])) advance();
                t.text = std::string(src_.substr(t.begin, i_ - t.begin));
                if (t.text == "<-") t.kind = Tok::LArrow;
                else if (t.text == "->") t.kind = Tok::RArrow;
                else if (t.text == "|->") t.kind = Tok::MapsTo;
                else if (t.text == "|") t.kind = Tok::Bar;
                else if (t.text == "=") t.kind = Tok::Equals;
                else t.kind = Tok::Op;
            } else {
                switch (c) {
                case '\\': t.kind = Tok::Backslash; break;
                case '.': t.kind = Tok::Dot; break;
                case ':': t.kind = Tok::Colon; break;
                case ';': t.kind = Tok::Semi; break;
                case ',': t.kind = Tok::Comma; break;
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case '[': t.kind = Tok::LBracket; break;
                case ']': t.kind = Tok::RBracket; break;
                case '{': t.kind = Tok::LBrace; break;
                case '}': t.kind = Tok::RBrace; break;
                default: throw ParseError(t.pos, std::string("unexpected character '") + c + "'");
                }
                t.text = std::string(1, c);
                advance();
            }
            t.end = i_;
            out.push_back(std::move(t));
        }
        markBoundaries(out);
        return out;
    }

private:
    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skipSpaceAndComments() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    void lexNumber(Token& t) {
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
        bool isFloat = false;
        // `5.` followed by a space is the integer 5 then a dot (for x:5. e)
        if (i_ + 1 < src_.size() && src_[i_] == '.' && std::isdigit(static_cast<unsigned char>(src_[i_ + 1]))) {
            isFloat = true;
            advance();
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t j = i_ + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
                isFloat = true;
                while (i_ < j) advance();
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
            }
        }
        std::string text(src_.substr(t.begin, i_ - t.begin));
        t.text = text;
        if (isFloat) {
            t.kind = Tok::Float;
            t.floatValue = std::stod(text);
        } else {
            t.kind = Tok::Int;
            std::uint64_t v = 0;
            for (char d : text) {
                std::uint64_t digit = static_cast<std::uint64_t>(d - '0');
                if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
                    throw ParseError(t.pos, "integer literal out of range");
                }
                v = v * 10 + digit;
            }
            // magnitude 2^63 is only legal as a negative literal; checked by the parser
            if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1) {
                throw ParseError(t.pos, "integer literal out of range");
            }
            t.intValue = v;
        }
    }

    void lexString(Token& t) {
        advance();
        std::string value;
        for (;;) {
            if (i_ >= src_.size() || src_[i_] == '\n') {
                throw ParseError(t.pos, "unterminated string literal");
            }
            char c = src_[i_];
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                SourcePos escPos{line_, col_};
                advance();
                if (i_ >= src_.size()) throw ParseError(escPos, "unterminated string literal");
                char e = src_[i_];
                advance();
                switch (e) {
                case '"': value += '"'; break;
                case '\\': value += '\\'; break;
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case 'r': value += '\r'; break;
                case 'x': {
                    int code = 0;
                    for (int k = 0; k < 2; ++k) {
                        if (i_ >= src_.size() || !std::isxdigit(static_cast<unsigned char>(src_[i_]))) {
                            throw ParseError(escPos, "malformed \\x escape");
                        }
                        char h = src_[i_];
                        code = code * 16 + (std::isdigit(static_cast<unsigned char>(h))
                                                ? h - '0'
                                                : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
                        advance();
                    }
                    value += static_cast<char>(code);
                    break;
                }
                default: throw ParseError(escPos, std::string("unknown escape '\\") + e + "'");
                }
                continue;
            }
            value += c;
            advance();
        }
        t.kind = Tok::String;
        t.text = std::move(value);
    }

    static bool continues(const Token& prev) {
        switch (prev.kind) {
        case Tok::Backslash: case Tok::Dot: case Tok::Colon: case Tok::Semi: case Tok::Comma:
        case Tok::LParen: case Tok::LBracket: case Tok::LBrace: case Tok::LArrow: case Tok::RArrow:
        case Tok::MapsTo: case Tok::Bar: case Tok::Equals: case Tok::Op:
            return true;
        case Tok::Ident: {
            static const std::set<std::string> openers = {"for", "handle", "handler", "perform", "if",
                                                          "then", "else", "case", "of"};
            return openers.contains(prev.text);
        }
        default:
            return false;
        }
    }

    static void markBoundaries(std::vector<Token>& toks) {
        int depth = 0;
        for (std::size_t k = 0; k < toks.size(); ++k) {
            Token& t = toks[k];
            if (k > 0 && t.kind != Tok::End && t.pos.column == 1 && depth == 0 && !continues(toks[k - 1])) {
                t.boundary = true;
            }
            switch (t.kind) {
            case Tok::LParen: case Tok::LBracket: case Tok::LBrace: ++depth; break;
            case Tok::RParen: case Tok::RBracket: case Tok::RBrace: depth = std::max(0, depth - 1); break;
            default: break;
            }
        }
    }

    std::string_view src_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

int precedence(const std::string& op) {
    if (op == "*" || op == "/") return 4;
    if (op == "+" || op == "-" || op == "++") return 3;
    if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=") return 2;
    return 1;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) { beginItem(0); }

    SurfaceProgram program() {
        SurfaceProgram prog;
        std::set<std::string> names;
        while (toks_[pos_].kind != Tok::End) {
            beginItem(pos_);
            SourcePos itemPos = cur().pos;
            if (prog.main) {
                throw ParseError(itemPos, "unexpected item after the result expression");
            }
            if (atDefinition()) {
                PatternPtr pat;
                if (cur().kind == Tok::LParen && peek(1).kind == Tok::Op) {
                    pat = std::make_shared<const Pattern>(Pattern{Pattern::Kind::Var, peek(1).text, {}, cur().pos});
                    pos_ += 3;
                } else {
                    pat = pattern();
                }
                expect(Tok::Equals, "'='");
                SExprPtr body = expression();
                finishItem();
                std::vector<std::string> bound;
                collectNames(*pat, bound);
                for (const std::string& n : bound) {
                    if (!names.insert(n).second) {
                        throw ParseError(pat->pos, "duplicate definition of '" + n + "'");
                    }
                }
                prog.definitions.push_back({std::move(pat), std::move(body)});
            } else {
                prog.main = expression();
                finishItem();
            }
            pos_ = itemEnd_;
        }
        return prog;
    }

    SExprPtr singleExpression() {
        // a standalone expression ignores the layout rule
        itemEnd_ = toks_.size() - 1;
        SExprPtr e = expression();
        finishItem();
        return e;
    }

private:
    // -- token access --------------------------------------------------------

    void beginItem(std::size_t start) {
        itemStart_ = start;
        itemEnd_ = start + 1;
        while (itemEnd_ < toks_.size() && toks_[itemEnd_].kind != Tok::End && !toks_[itemEnd_].boundary) {
            ++itemEnd_;
        }
        if (itemEnd_ >= toks_.size()) itemEnd_ = toks_.size() - 1;
    }

    const Token& peek(std::size_t k = 0) const {
        std::size_t idx = pos_ + k;
        if (idx >= itemEnd_) {
            endToken_ = toks_[std::min(itemEnd_, toks_.size() - 1)];
            endToken_.kind = Tok::End;
            return endToken_;
        }
        return toks_[idx];
    }
    const Token& cur() const { return peek(0); }

    bool isIdent(const Token& t, std::string_view text) const { return t.kind == Tok::Ident && t.text == text; }
    bool atKeyword(std::string_view kw) const { return isIdent(cur(), kw); }

    Token take() {
        Token t = cur();
        if (t.kind != Tok::End) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw ParseError(cur().pos, "expected " + expected + ", found " + describe(cur()));
    }

    Token expect(Tok kind, const std::string& what) {
        if (cur().kind != kind) fail(what);
        return take();
    }

    void expectKeyword(std::string_view kw) {
        if (!atKeyword(kw)) fail("'" + std::string(kw) + "'");
        take();
    }

    void finishItem() {
        if (cur().kind != Tok::End) {
            throw ParseError(cur().pos, "unexpected " + describe(cur()));
        }
    }

    std::string identifier(const std::string& what) {
        const Token& t = cur();
        if (t.kind != Tok::Ident || isKeyword(t.text)) fail(what);
        return take().text;
    }

    // -- definitions and patterns -------------------------------------------

    bool atDefinition() const {
        const Token& t = cur();
        if (t.kind == Tok::Ident && !isKeyword(t.text)) return peek(1).kind == Tok::Equals;
        if (t.kind == Tok::LParen && peek(1).kind == Tok::Op && peek(2).kind == Tok::RParen) {
            return peek(3).kind == Tok::Equals;
        }
        if (t.kind == Tok::LParen || t.kind == Tok::LBracket) {
            std::size_t k = 0;
            return skipPattern(k) && peek(k).kind == Tok::Equals;
        }
        return false;
    }

    // Scans a pattern starting at peek(k) without consuming; advances k past it.
    bool skipPattern(std::size_t& k) const {
        const Token& t = peek(k);
        if (t.kind == Tok::Ident) {
            if (isKeyword(t.text)) return false;
            ++k;
            return true;
        }
        if (t.kind != Tok::LParen && t.kind != Tok::LBracket) return false;
        Tok close = t.kind == Tok::LParen ? Tok::RParen : Tok::RBracket;
        ++k;
        if (t.kind == Tok::LBracket && peek(k).kind == Tok::RBracket) {
            ++k;
            return true;
        }
        for (;;) {
            if (!skipPattern(k)) return false;
            if (peek(k).kind == Tok::Comma) {
                ++k;
                continue;
            }
            if (peek(k).kind == close) {
                ++k;
                return true;
            }
            return false;
        }
    }

    static void collectNames(const Pattern& p, std::vector<std::string>& out) {
        if (p.kind == Pattern::Kind::Var) out.push_back(p.name);
        for (const auto& e : p.elems) collectNames(*e, out);
    }

    PatternPtr pattern() {
        Pattern p;
        p.pos = cur().pos;
        if (cur().kind == Tok::Ident && cur().text == "_") {
            take();
            p.kind = Pattern::Kind::Wildcard;
        } else if (cur().kind == Tok::Ident) {
            p.kind = Pattern::Kind::Var;
            p.name = identifier("pattern");
        } else if (cur().kind == Tok::LParen || cur().kind == Tok::LBracket) {
            bool tuple = cur().kind == Tok::LParen;
            Tok close = tuple ? Tok::RParen : Tok::RBracket;
            take();
            p.kind = tuple ? Pattern::Kind::Tuple : Pattern::Kind::Table;
            if (!(!tuple && cur().kind == Tok::RBracket)) {
                p.elems.push_back(pattern());
                while (cur().kind == Tok::Comma) {
                    take();
                    p.elems.push_back(pattern());
                }
            }
            expect(close, tuple ? "',' or ')'" : "',' or ']'");
            if (tuple && p.elems.size() < 2) {
                throw ParseError(p.pos, "tuple pattern needs at least two elements");
            }
        } else {
            fail("pattern");
        }
        return std::make_shared<const Pattern>(std::move(p));
    }

    bool atBind() const {
        std::size_t k = 0;
        return skipPattern(k) && peek(k).kind == Tok::LArrow;
    }

    // -- expressions ----------------------------------------------------------

    // Sequence level: lambdas, `p <- e; e` and `e; e`.
    SExprPtr expression() {
        SourcePos pos = cur().pos;
        if (cur().kind == Tok::Backslash) {
            return lambda(/*allowSeq=*/true);
        }
        if (atBind()) {
            PatternPtr pat = pattern();
            expect(Tok::LArrow, "'<-'");
            SExprPtr rhs = noSeq();
            expect(Tok::Semi, "';'");
            SExprPtr body = expression();
            return makeSurface(surface::Bind{std::move(pat), std::move(rhs), std::move(body)}, pos);
        }
        SExprPtr first = noSeq();
        if (cur().kind == Tok::Semi) {
            take();
            SExprPtr rest = expression();
            return makeSurface(surface::Seq{std::move(first), std::move(rest)}, pos);
        }
        return first;
    }

    // Everything except sequencing; `for`, `if` and `case` bodies live here.
    SExprPtr noSeq() {
        SourcePos pos = cur().pos;
        if (cur().kind == Tok::Backslash) {
            return lambda(/*allowSeq=*/false);
        }
        if (atKeyword("for")) {
            take();
            std::string var = cur().kind == Tok::Ident && cur().text == "_" ? take().text : identifier("loop variable");
            expect(Tok::Colon, "':'");
            SExprPtr size = infix(0);
            expect(Tok::Dot, "'.'");
            SExprPtr body = noSeq();
            return makeSurface(surface::For{std::move(var), std::move(size), std::move(body)}, pos);
        }
        if (atKeyword("if")) {
            take();
            SExprPtr c = noSeq();
            expectKeyword("then");
            SExprPtr t = noSeq();
            expectKeyword("else");
            SExprPtr e = noSeq();
            return makeSurface(surface::If{std::move(c), std::move(t), std::move(e)}, pos);
        }
        if (atKeyword("case")) {
            take();
            SExprPtr scrut = noSeq();
            expectKeyword("of");
            expectKeyword("Left");
            std::string lv = binder();
            expect(Tok::RArrow, "'->'");
            SExprPtr lb = noSeq();
            expect(Tok::Bar, "'|'");
            expectKeyword("Right");
            std::string rv = binder();
            expect(Tok::RArrow, "'->'");
            SExprPtr rb = noSeq();
            return makeSurface(surface::Case{std::move(scrut), std::move(lv), std::move(lb), std::move(rv), std::move(rb)},
                               pos);
        }
        if (atKeyword("handle") || atKeyword("handler")) {
            bool thunked = take().text == "handler";
            expect(Tok::LBrace, "'{'");
            std::vector<surface::Clause> clauses;
            for (;;) {
                surface::Clause cl;
                cl.pos = cur().pos;
                if (atKeyword("return") || atKeyword("traverse")) {
                    cl.name = take().text;
                } else {
                    cl.name = identifier("clause name (return, traverse or an operation)");
                }
                expect(Tok::MapsTo, "'|->'");
                cl.body = expression();
                clauses.push_back(std::move(cl));
                if (cur().kind == Tok::Comma) {
                    take();
                    if (cur().kind == Tok::RBrace) break;
                    continue;
                }
                break;
            }
            expect(Tok::RBrace, "',' or '}'");
            SExprPtr state = operandAtom();
            SExprPtr body = operandAtom();
            return makeSurface(surface::Handle{thunked, std::move(clauses), std::move(state), std::move(body)}, pos);
        }
        return infix(0);
    }

    std::string binder() {
        if (cur().kind == Tok::Ident && cur().text == "_") return take().text;
        if (cur().kind == Tok::LParen && peek(1).kind == Tok::Op && peek(2).kind == Tok::RParen) {
            take();
            std::string op = take().text;
            take();
            return op;
        }
        return identifier("binder");
    }

    SExprPtr lambda(bool allowSeq) {
        SourcePos pos = take().pos;
        std::string b = binder();
        expect(Tok::Dot, "'.'");
        SExprPtr body = allowSeq ? expression() : noSeq();
        return makeSurface(surface::Lam{std::move(b), std::move(body)}, pos);
    }

    SExprPtr infix(int minPrec) {
        SExprPtr lhs = application();
        while (cur().kind == Tok::Op && precedence(cur().text) > minPrec) {
            Token op = take();
            int prec = precedence(op.text);
            SExprPtr rhs = infix(prec);  // left-associative: rhs only takes tighter operators
            lhs = makeSurface(surface::Infix{op.text, lhs, std::move(rhs)}, op.pos);
        }
        return lhs;
    }

    bool startsAtom(const Token& t) const {
        switch (t.kind) {
        case Tok::Int: case Tok::Float: case Tok::String: case Tok::LParen: case Tok::LBracket:
            return true;
        case Tok::Ident:
            return !isKeyword(t.text) || t.text == "true" || t.text == "false" || t.text == "Left" ||
                   t.text == "Right" || t.text == "perform";
        default:
            return false;
        }
    }

    SExprPtr application() {
        SExprPtr fn = operandAtom();
        while (startsAtom(cur())) {
            SourcePos pos = cur().pos;
            SExprPtr arg = atom();
            fn = makeSurface(surface::App{std::move(fn), std::move(arg)}, pos);
        }
        return fn;
    }

    // An atom in operand-start position, where `-3` is a negative literal.
    SExprPtr operandAtom() {
        const Token& t = cur();
        if (t.kind == Tok::Op && t.text == "-" && (peek(1).kind == Tok::Int || peek(1).kind == Tok::Float) &&
            peek(1).begin == t.end) {
            SourcePos pos = take().pos;
            Token num = take();
            if (num.kind == Tok::Float) return makeSurface(surface::Lit{Constant(-num.floatValue)}, pos);
            std::int64_t v = num.intValue == (std::uint64_t{1} << 63)
                                 ? std::numeric_limits<std::int64_t>::min()
                                 : -static_cast<std::int64_t>(num.intValue);
            return makeSurface(surface::Lit{Constant(v)}, pos);
        }
        return atom();
    }

    SExprPtr atom() {
        const Token& t = cur();
        SourcePos pos = t.pos;
        switch (t.kind) {
        case Tok::Int: {
            Token num = take();
            if (num.intValue > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
                throw ParseError(pos, "integer literal out of range");
            }
            return makeSurface(surface::Lit{Constant(static_cast<std::int64_t>(num.intValue))}, pos);
        }
        case Tok::Float:
            return makeSurface(surface::Lit{Constant(take().floatValue)}, pos);
        case Tok::String:
            return makeSurface(surface::Lit{Constant(take().text)}, pos);
        case Tok::LBracket: {
            take();
            std::vector<SExprPtr> elems;
            if (cur().kind != Tok::RBracket) {
                elems.push_back(expression());
                while (cur().kind == Tok::Comma) {
                    take();
                    elems.push_back(expression());
                }
            }
            expect(Tok::RBracket, "',' or ']'");
            return makeSurface(surface::Table{std::move(elems)}, pos);
        }
        case Tok::LParen: {
            take();
            if (cur().kind == Tok::RParen) {
                take();
                return makeSurface(surface::Lit{Constant(Unit{})}, pos);
            }
            if (cur().kind == Tok::Op && peek(1).kind == Tok::RParen) {
                std::string op = take().text;
                take();
                return makeSurface(surface::Var{std::move(op)}, pos);
            }
            SExprPtr first = expression();
            if (cur().kind == Tok::Comma) {
                std::vector<SExprPtr> elems{std::move(first)};
                while (cur().kind == Tok::Comma) {
                    take();
                    elems.push_back(expression());
                }
                expect(Tok::RParen, "',' or ')'");
                return makeSurface(surface::Tuple{std::move(elems)}, pos);
            }
            expect(Tok::RParen, "')'");
            return first;
        }
        case Tok::Ident: {
            if (t.text == "true" || t.text == "false") {
                bool b = take().text == "true";
                return makeSurface(surface::Lit{Constant(b)}, pos);
            }
            if (t.text == "Left" || t.text == "Right") {
                return makeSurface(surface::Var{take().text}, pos);
            }
            if (t.text == "perform") {
                take();
                std::string op = identifier("operation name");
                return makeSurface(surface::Perform{std::move(op)}, pos);
            }
            if (!isKeyword(t.text)) {
                return makeSurface(surface::Var{take().text}, pos);
            }
            break;
        }
        default:
            break;
        }
        fail("expression (literal, identifier, '(', '[' or perform)");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t itemStart_ = 0;
    std::size_t itemEnd_ = 0;
    mutable Token endToken_;
};

} // namespace

SurfaceProgram parse(std::string_view source) {
    Parser p(Lexer(source).run());
    return p.program();
}

SExprPtr parseExpression(std::string_view source) {
    Parser p(Lexer(source).run());
    return p.singleExpression();
}

SurfaceProgram link(const SurfaceProgram& prelude, const SurfaceProgram& program) {
    SurfaceProgram out;
    out.definitions = prelude.definitions;
    out.definitions.insert(out.definitions.end(), program.definitions.begin(), program.definitions.end());
    out.main = program.main;
    return out;
}

} // namespace lambdap
