#include "gtgd/benchmark.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

namespace gtgd {

BenchmarkRow make_row(std::string input, Algorithm a, const SaturationStats& s, std::string status)
{
    BenchmarkRow r;
    r.input = std::move(input);
    r.algorithm = to_string(a);
    r.input_size = s.input_size;
    r.output_size = s.output_size;
    r.blowup = s.blowup();
    r.max_body_atoms = s.max_body_atoms;
    r.derived = s.derived;
    r.fwd_subsumed = s.fwd_subsumed;
    r.bwd_subsumed = s.bwd_subsumed;
    r.time_ms = s.time_ms;
    r.status = std::move(status);
    return r;
}

std::string csv_header()
{
    return "input,algorithm,input_size,output_size,blowup,max_body_atoms,derived,fwd_subsumed,bwd_subsumed,time_ms,"
           "status";
}

namespace {

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::string to_csv(const BenchmarkRow& r)
{
    return quote(r.input) + "," + r.algorithm + "," + std::to_string(r.input_size) + "," +
           std::to_string(r.output_size) + "," + fixed(r.blowup, 4) + "," + std::to_string(r.max_body_atoms) + "," +
           std::to_string(r.derived) + "," + std::to_string(r.fwd_subsumed) + "," + std::to_string(r.bwd_subsumed) +
           "," + fixed(r.time_ms, 3) + "," + r.status;
}

void append_csv(const std::string& path, const BenchmarkRow& r)
{
    int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0)
        throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
    if (::flock(fd, LOCK_EX) != 0) {
        ::close(fd);
        throw std::runtime_error("cannot lock " + path + ": " + std::strerror(errno));
    }
    struct stat st {};
    std::string text;
    if (::fstat(fd, &st) == 0 && st.st_size == 0)
        text = csv_header() + "\n";
    text += to_csv(r) + "\n";
    const char* p = text.data();
    std::size_t left = text.size();
    bool ok = true;
    while (left > 0) {
        ssize_t n = ::write(fd, p, left);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            ok = false;
            break;
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (!ok)
        throw std::runtime_error("cannot write " + path);
}

} // namespace gtgd
