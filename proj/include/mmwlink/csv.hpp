#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace mmwlink::csv {

// RFC-4180 style: header row, CRLF records, quoting only when a field
// needs it. Numbers format via %.10g so equal inputs give equal bytes.
inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    Writer& field(const std::string& s)
    {
        if (!first_)
            os_ << ',';
        first_ = false;
        if (s.find_first_of(",\"\r\n") != std::string::npos) {
            os_ << '"';
            for (char c : s) {
                if (c == '"')
                    os_ << '"';
                os_ << c;
            }
            os_ << '"';
        } else {
            os_ << s;
        }
        return *this;
    }

    Writer& field(double v) { return field(format_number(v)); }
    Writer& field(int v) { return field(std::to_string(v)); }
    Writer& field(size_t v) { return field(std::to_string(v)); }

    void end_row()
    {
        os_ << "\r\n";
        first_ = true;
    }

    void row(const std::vector<std::string>& fields)
    {
        for (const auto& f : fields)
            field(f);
        end_row();
    }

private:
    std::ostream& os_;
    bool first_ = true;
};

} // namespace mmwlink::csv
