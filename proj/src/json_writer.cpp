#include "topicflow/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace topicflow {

std::string JsonWriter::fixed6(double v) {
    if (!std::isfinite(v))
        return "null"; // JSON has no inf/nan; callers are expected to filter these
    if (v == 0.0)
        v = 0.0; // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string JsonWriter::escape(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (unsigned char c : raw) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    return out;
}

} // namespace topicflow
