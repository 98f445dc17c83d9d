#ifndef TOPICFLOW_JSON_WRITER_HPP
#define TOPICFLOW_JSON_WRITER_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace topicflow {

/// Streaming JSON emitter with byte-stable output: keys in caller order,
/// two-space indentation, every double printed with exactly six decimals.
/// (Parsing stays on the vendored library; this exists because its printer
/// uses shortest-round-trip floats, which breaks fixed-format output.)
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    JsonWriter(const JsonWriter&) = delete;
    JsonWriter& operator=(const JsonWriter&) = delete;

    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& name) {
        separate();
        write_string(name);
        out_ << ": ";
        pending_key_ = true;
    }

    void value(const std::string& v) { scalar([&] { write_string(v); }); }
    void value(const char* v) { value(std::string(v)); }
    void value(double v) { scalar([&] { out_ << fixed6(v); }); }
    void value(std::int64_t v) { scalar([&] { out_ << v; }); }
    void value(std::uint64_t v) { scalar([&] { out_ << v; }); }
    void value(int v) { value(static_cast<std::int64_t>(v)); }
    void value(bool v) { scalar([&] { out_ << (v ? "true" : "false"); }); }
    void null() { scalar([&] { out_ << "null"; }); }

    /// Finishes the document with a trailing newline.
    void finish() { out_ << '\n'; }

    static std::string fixed6(double v);
    static std::string escape(const std::string& raw);

private:
    template <typename Fn> void scalar(Fn&& emit) {
        separate();
        emit();
        pending_key_ = false;
    }

    void open(char bracket) {
        separate();
        out_ << bracket;
        stack_.push_back({bracket, false});
        pending_key_ = false;
    }

    void close(char bracket) {
        const bool had_items = stack_.back().has_items;
        stack_.pop_back();
        if (had_items) {
            out_ << '\n';
            indent();
        }
        out_ << bracket;
        pending_key_ = false;
    }

    void separate() {
        if (pending_key_)
            return;
        if (!stack_.empty()) {
            if (stack_.back().has_items)
                out_ << ',';
            out_ << '\n';
            stack_.back().has_items = true;
            indent();
        }
    }

    void indent() {
        for (std::size_t i = 0; i < stack_.size(); ++i)
            out_ << "  ";
    }

    void write_string(const std::string& s) { out_ << '"' << escape(s) << '"'; }

    struct Frame {
        char bracket;
        bool has_items;
    };

    std::ostream& out_;
    std::vector<Frame> stack_;
    bool pending_key_ = false;
};

} // namespace topicflow

#endif
