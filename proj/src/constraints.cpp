#include "evokernel/constraints.hpp"

#include <cctype>

namespace evokernel {

bool ConstraintAst::operator==(const ConstraintAst& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case Kind::Total:
        case Kind::Unique:
            return refs == other.refs;
        case Kind::BeforeEquals:
            return earlier == other.earlier && later == other.later &&
                   target == other.target;
        case Kind::And: {
            if (children.size() != other.children.size()) return false;
            for (std::size_t i = 0; i < children.size(); ++i)
                if (!(*children[i] == *other.children[i])) return false;
            return true;
        }
    }
    return false;
}

std::string ConstraintAst::render() const {
    auto reflist = [this]() {
        std::string out;
        bool first = true;
        for (const RoleRef& r : refs) {
            if (!first) out += ", ";
            first = false;
            out += r.render();
        }
        return out;
    };
    switch (kind) {
        case Kind::Total:
            return "TOTAL { " + reflist() + " }";
        case Kind::Unique:
            return "UNIQUE { " + reflist() + " }";
        case Kind::BeforeEquals:
            return "( " + earlier + " BEFORE " + later + " ) EQUALS " + target;
        case Kind::And: {
            std::string out;
            bool first = true;
            for (const AstPtr& c : children) {
                if (!first) out += " AND ";
                first = false;
                out += c->render();
            }
            return out;
        }
    }
    return "";
}

namespace {

struct Token {
    enum class Kind { Keyword, Ident, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t pos = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '{' || c == '}' || c == ',' || c == '.' || c == '(' || c == ')') {
            out.push_back({Token::Kind::Punct, std::string(1, c), i});
            ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            std::string word = text.substr(start, i - start);
            bool keyword = word == "TOTAL" || word == "UNIQUE" || word == "AND" ||
                           word == "BEFORE" || word == "EQUALS";
            out.push_back({keyword ? Token::Kind::Keyword : Token::Kind::Ident,
                           std::move(word), start});
            continue;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", i);
    }
    out.push_back({Token::Kind::End, "", text.size()});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : tokens_(lex(text)) {}

    AstPtr parse() {
        AstPtr ast = conjunction();
        expect_end();
        return ast;
    }

private:
    std::vector<Token> tokens_;
    std::size_t at_ = 0;

    const Token& peek() const { return tokens_[at_]; }
    Token take() { return tokens_[at_++]; }

    bool take_keyword(const std::string& kw) {
        if (peek().kind == Token::Kind::Keyword && peek().text == kw) {
            ++at_;
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (peek().kind != Token::Kind::Punct || peek().text != p)
            throw ParseError("expected '" + p + "'", peek().pos);
        ++at_;
    }

    void expect_keyword(const std::string& kw) {
        if (!take_keyword(kw)) throw ParseError("expected '" + kw + "'", peek().pos);
    }

    void expect_end() {
        if (peek().kind != Token::Kind::End)
            throw ParseError("unexpected trailing input '" + peek().text + "'", peek().pos);
    }

    std::string ident() {
        if (peek().kind != Token::Kind::Ident)
            throw ParseError("expected an identifier", peek().pos);
        return take().text;
    }

    RoleRef role_ref() {
        RoleRef r;
        r.otype = ident();
        expect_punct(".");
        r.role = ident();
        return r;
    }

    std::set<RoleRef> ref_list() {
        std::set<RoleRef> refs;
        expect_punct("{");
        if (peek().kind == Token::Kind::Punct && peek().text == "}")
            throw ParseError("empty role reference list", peek().pos);
        refs.insert(role_ref());
        while (peek().kind == Token::Kind::Punct && peek().text == ",") {
            ++at_;
            refs.insert(role_ref());
        }
        expect_punct("}");
        return refs;
    }

    AstPtr atom() {
        auto node = std::make_shared<ConstraintAst>();
        if (take_keyword("TOTAL")) {
            node->kind = ConstraintAst::Kind::Total;
            node->refs = ref_list();
            return node;
        }
        if (take_keyword("UNIQUE")) {
            node->kind = ConstraintAst::Kind::Unique;
            node->refs = ref_list();
            return node;
        }
        if (peek().kind == Token::Kind::Punct && peek().text == "(") {
            ++at_;
            node->kind = ConstraintAst::Kind::BeforeEquals;
            node->earlier = ident();
            expect_keyword("BEFORE");
            node->later = ident();
            expect_punct(")");
            expect_keyword("EQUALS");
            node->target = ident();
            return node;
        }
        throw ParseError("expected TOTAL, UNIQUE, or '('", peek().pos);
    }

    AstPtr conjunction() {
        std::vector<AstPtr> parts;
        parts.push_back(atom());
        while (take_keyword("AND")) parts.push_back(atom());
        if (parts.size() == 1) return parts.front();
        auto node = std::make_shared<ConstraintAst>();
        node->kind = ConstraintAst::Kind::And;
        node->children = std::move(parts);
        return node;
    }
};

void flatten_into(const AstPtr& ast, std::vector<AstPtr>& out) {
    if (ast->kind == ConstraintAst::Kind::And) {
        for (const AstPtr& c : ast->children) flatten_into(c, out);
        return;
    }
    if (ast->kind == ConstraintAst::Kind::Unique && ast->refs.size() > 1) {
        for (const RoleRef& r : ast->refs) {
            auto single = std::make_shared<ConstraintAst>();
            single->kind = ConstraintAst::Kind::Unique;
            single->refs = {r};
            out.push_back(std::move(single));
        }
        return;
    }
    out.push_back(ast);
}

}  // namespace

AstPtr parse_constraint(const std::string& text) { return Parser(text).parse(); }

std::vector<AstPtr> flatten_conjuncts(const AstPtr& ast) {
    std::vector<AstPtr> out;
    flatten_into(ast, out);
    return out;
}

}  // namespace evokernel
