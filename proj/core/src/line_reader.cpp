#include "beircast/line_reader.hpp"

#include "beircast/error.hpp"

#include <zlib.h>

#include <cstring>
#include <vector>

namespace beircast {

struct LineReader::Impl {
    gzFile file = nullptr;
    std::vector<char> buf;
    std::size_t pos = 0;   // start of the unconsumed region
    std::size_t end = 0;   // end of valid data
    bool eof = false;
    std::string carry;     // line fragment spanning a refill

    explicit Impl(const std::filesystem::path& path) : buf(std::size_t(4) << 20) {
        file = gzopen(path.string().c_str(), "rb");
        if (!file) throw DataError("cannot open input file: " + path.string());
        gzbuffer(file, 1 << 20);
    }

    ~Impl() {
        if (file) gzclose(file);
    }

    bool refill() {
        pos = 0;
        end = 0;
        const int n = gzread(file, buf.data(), unsigned(buf.size()));
        if (n < 0) {
            int errnum = 0;
            const char* msg = gzerror(file, &errnum);
            throw DataError(std::string("error reading input file: ") + (msg ? msg : "unknown"));
        }
        end = std::size_t(n);
        if (end == 0) eof = true;
        return end > 0;
    }
};

LineReader::LineReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>(path)) {}
LineReader::~LineReader() = default;

bool LineReader::next(std::string_view& line) {
    auto& s = *impl_;
    s.carry.clear();
    while (true) {
        if (s.pos >= s.end) {
            if (s.eof || !s.refill()) break;
        }
        const char* base = s.buf.data() + s.pos;
        const std::size_t avail = s.end - s.pos;
        const char* nl = static_cast<const char*>(std::memchr(base, '\n', avail));
        if (nl) {
            std::size_t len = std::size_t(nl - base);
            s.pos += len + 1;
            if (!s.carry.empty()) {
                s.carry.append(base, len);
                if (!s.carry.empty() && s.carry.back() == '\r') s.carry.pop_back();
                line = s.carry;
                return true;
            }
            if (len > 0 && base[len - 1] == '\r') --len;
            line = std::string_view(base, len);
            return true;
        }
        s.carry.append(base, avail);
        s.pos = s.end;
    }
    if (!s.carry.empty()) {
        if (s.carry.back() == '\r') s.carry.pop_back();
        line = s.carry;
        return true;
    }
    return false;
}

} // namespace beircast
