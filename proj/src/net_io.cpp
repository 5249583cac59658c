#include "pnc/net_io.hpp"

#include "pnc/errors.hpp"
#include "pnc/reduction.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace pnc {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    void skip_space()
    {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
    }
    bool at_end()
    {
        skip_space();
        return pos_ >= line_.size();
    }
    bool accept(std::string_view token)
    {
        skip_space();
        if (line_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view token)
    {
        if (!accept(token))
            fail("expected '" + std::string(token) + "'");
    }

    std::string name()
    {
        skip_space();
        const std::size_t start = pos_;
        if (pos_ < line_.size() && is_name_start(line_[pos_]))
            while (pos_ < line_.size() && is_name_char(line_[pos_]))
                ++pos_;
        if (start == pos_)
            fail("expected an identifier");
        return std::string(line_.substr(start, pos_ - start));
    }

    /// Any run of non-space characters.
    std::string word()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a name");
        return std::string(line_.substr(start, pos_ - start));
    }

    std::uint64_t natural()
    {
        skip_space();
        if (pos_ < line_.size() && line_[pos_] == '-')
            fail("negative weight or marking");
        const std::size_t start = pos_;
        while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a natural number");
        try {
            return std::stoull(std::string(line_.substr(start, pos_ - start)));
        } catch (const std::out_of_range&) {
            pos_ = start;
            fail("number out of range");
        }
    }

    std::size_t column() const { return pos_ + 1; }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_no_, column(), what); }

private:
    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

/// Splits text into lines, dropping CR and comments.
std::vector<std::string_view> logical_lines(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.push_back(line);
        if (end == text.size())
            break;
        start = end + 1;
    }
    return out;
}

}  // namespace

Net parse_net(std::string_view text, const std::string& default_name)
{
    std::string name = default_name;
    bool named = false;
    struct TransDecl {
        std::string name;
        std::vector<std::pair<std::string, Weight>> in, out;
    };
    std::vector<TransDecl> trans_decls;
    // places are created in order of first mention
    std::vector<std::string> place_order;
    std::map<std::string, bool> mentioned;
    std::map<std::string, Tokens> declared_tokens;
    std::map<std::string, std::size_t> trans_seen;

    auto mention = [&](const std::string& p) {
        if (!mentioned.count(p)) {
            mentioned[p] = true;
            place_order.push_back(p);
        }
    };

    const auto lines = logical_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        LineScanner scan(lines[i], i + 1);
        if (scan.at_end())
            continue;
        const std::string keyword = scan.name();
        if (keyword == "net") {
            if (named)
                scan.fail("duplicate net declaration");
            name = scan.word();
            named = true;
        } else if (keyword == "pl") {
            const std::size_t col = scan.column() + 1;
            std::string p = scan.name();
            Tokens tokens = 0;
            if (scan.accept("(")) {
                tokens = scan.natural();
                scan.expect(")");
            }
            if (trans_seen.count(p))
                throw ParseError(i + 1, col, "'" + p + "' is already a transition");
            if (auto it = declared_tokens.find(p); it != declared_tokens.end() && it->second != tokens)
                throw ParseError(i + 1, col, "place '" + p + "' redeclared with a different marking");
            declared_tokens[p] = tokens;
            mention(p);
        } else if (keyword == "tr") {
            const std::size_t col = scan.column() + 1;
            TransDecl decl;
            decl.name = scan.name();
            if (trans_seen.count(decl.name))
                throw ParseError(i + 1, col, "duplicate transition '" + decl.name + "'");
            if (mentioned.count(decl.name))
                throw ParseError(i + 1, col, "'" + decl.name + "' is already a place");
            trans_seen[decl.name] = i + 1;
            bool outputs = false;
            while (!scan.at_end()) {
                if (scan.accept("->")) {
                    if (outputs)
                        scan.fail("second '->'");
                    outputs = true;
                    continue;
                }
                const std::size_t arc_col = scan.column() + 1;
                std::string p = scan.name();
                Weight w = 1;
                if (scan.accept("*"))
                    w = scan.natural();
                if (trans_seen.count(p))
                    throw ParseError(i + 1, arc_col, "'" + p + "' is a transition, not a place");
                mention(p);
                (outputs ? decl.out : decl.in).emplace_back(std::move(p), w);
            }
            if (!outputs)
                scan.fail("expected '->'");
            trans_decls.push_back(std::move(decl));
        } else {
            throw ParseError(i + 1, 1, "expected 'net', 'pl' or 'tr'");
        }
    }

    NetBuilder b(name);
    for (const auto& p : place_order) {
        PlaceId id = b.place(p);
        if (auto it = declared_tokens.find(p); it != declared_tokens.end())
            b.set_initial(id, it->second);
    }
    for (const auto& decl : trans_decls) {
        TransId t = b.add_transition(decl.name);
        for (const auto& [p, w] : decl.in)
            b.add_input(t, b.place(p), w);
        for (const auto& [p, w] : decl.out)
            b.add_output(t, b.place(p), w);
    }
    return b.build();
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << text;
}

Net read_net_file(const std::filesystem::path& path)
{
    return parse_net(read_text_file(path), path.stem().string());
}

std::string serialize_net(const Net& net)
{
    std::ostringstream out;
    out << "net " << net.name() << "\n";
    for (PlaceId p : net.places())
        out << "pl " << net.place_name(p) << " (" << net.initial(p) << ")\n";
    auto arcs = [&](std::span<const Arc> list) {
        for (const Arc& a : list) {
            out << ' ' << net.place_name(a.place);
            if (a.weight != 1)
                out << '*' << a.weight;
        }
    };
    for (TransId t : net.transitions()) {
        out << "tr " << net.transition_name(t);
        arcs(net.pre(t));
        out << " ->";
        arcs(net.post(t));
        out << "\n";
    }
    return out.str();
}

std::string serialize_trace(const ReductionTrace& trace)
{
    std::string out;
    for (const auto& step : trace.steps)
        out += format_step(step) + "\n";
    return out;
}

ReductionTrace parse_trace(std::string_view text, const Net& initial)
{
    std::vector<ReductionStep> steps;
    const auto lines = logical_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        LineScanner scan(lines[i], i + 1);
        if (scan.at_end())
            continue;
        const std::string kind_text = scan.word();
        std::optional<RuleKind> kind = parse_rule_kind(kind_text);
        if (!kind)
            throw ParseError(i + 1, 1, "unknown rule kind '" + kind_text + "'");
        scan.expect("|-");
        ReductionStep step;
        step.kind = *kind;
        const std::string_view line = lines[i];
        const std::size_t body_start = line.find("|-") + 2;
        const std::string_view body = line.substr(body_start);
        if (step.kind == RuleKind::T || step.kind == RuleKind::D || step.kind == RuleKind::F) {
            std::vector<std::string> names;
            std::string keyword = step.kind == RuleKind::F ? "fired" : "removed";
            bool closed = false;
            while (!scan.at_end()) {
                std::string n = scan.name();
                if (n == keyword) {
                    closed = true;
                    break;
                }
                names.push_back(std::move(n));
            }
            if (!closed || !scan.at_end() || names.empty())
                scan.fail("expected transition names followed by '" + keyword + "'");
            if (step.kind == RuleKind::F && names.size() != 1)
                scan.fail("a fire-once step names exactly one transition");
            step.removed_transitions = std::move(names);
            if (step.kind == RuleKind::F)
                step.count_increment = 1;
        } else {
            try {
                step.constraint = parse_constraint(body);
            } catch (const ParseError& e) {
                throw ParseError(i + 1, body_start + e.column(), e.message());
            }
        }
        steps.push_back(std::move(step));
    }
    return replay(initial, std::move(steps));
}

}  // namespace pnc
