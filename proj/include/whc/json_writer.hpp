#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace whc {

/// Render a double with 17 significant digits (round-trip exact). JSON has
/// no literals for non-finite values, so they become quoted strings.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Minimal streaming JSON writer with caller-controlled key order, so a run
/// with a fixed seed reproduces its output byte for byte.
class JsonWriter {
public:
    JsonWriter& begin_object() { return token("{", true); }
    JsonWriter& end_object() { return close("}"); }
    JsonWriter& begin_array() { return token("[", true); }
    JsonWriter& end_array() { return close("]"); }

    JsonWriter& key(std::string_view k) {
        comma();
        out_ += '"';
        escape(k);
        out_ += "\":";
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) { return raw(format_double(v)); }
    JsonWriter& value(int v) { return raw(std::to_string(v)); }
    JsonWriter& value(long long v) { return raw(std::to_string(v)); }
    JsonWriter& value(unsigned long v) { return raw(std::to_string(v)); }
    JsonWriter& value(unsigned long long v) { return raw(std::to_string(v)); }
    JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter& value(std::string_view s) {
        comma();
        out_ += '"';
        escape(s);
        out_ += '"';
        return *this;
    }
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }
    JsonWriter& null() { return raw("null"); }

    const std::string& str() const { return out_; }

private:
    JsonWriter& raw(std::string_view s) {
        comma();
        out_ += s;
        return *this;
    }
    JsonWriter& token(std::string_view s, bool opens) {
        comma();
        out_ += s;
        if (opens) fresh_ = true;
        return *this;
    }
    JsonWriter& close(std::string_view s) {
        out_ += s;
        fresh_ = false;
        return *this;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[') {
            out_ += ',';
        }
        fresh_ = false;
    }
    void escape(std::string_view s) {
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
    }

    std::string out_;
    bool pending_value_ = false;
    bool fresh_ = true;
};

}  // namespace whc
