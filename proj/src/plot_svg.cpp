#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "fbpulse/pulse_io.hpp"

namespace fbpulse::io {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v == 0.0 ? 0.0 : v);
    return buf;
}

struct Series {
    std::string name;
    std::string color;
    std::vector<double> y;
};

class Frame {
public:
    Frame(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        if (!(x1_ > x0_)) {
            x0_ -= 1.0;
            x1_ += 1.0;
        }
    }

    double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kTop + (y1_ - y) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

    std::string axes(const std::string& xlabel, const std::string& ylabel, int yticks) const {
        std::string out;
        const double bottom = kHeight - kBottom;
        const double right = kWidth - kRight;
        out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
               num(right - kLeft) + "\" height=\"" + num(bottom - kTop) +
               "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double x = x0_ + (x1_ - x0_) * i / 4.0;
            out += "<line x1=\"" + num(px(x)) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(px(x)) +
                   "\" y2=\"" + num(bottom + 5) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + num(px(x)) + "\" y=\"" + num(bottom + 20) +
                   "\" text-anchor=\"middle\">" + label(x) + "</text>\n";
        }
        for (int i = 0; i <= yticks; ++i) {
            const double y = y0_ + (y1_ - y0_) * i / yticks;
            out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(kLeft) +
                   "\" y2=\"" + num(py(y)) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(y) + 4) +
                   "\" text-anchor=\"end\">" + label(y) + "</text>\n";
        }
        out += "<text x=\"" + num(0.5 * (kLeft + right)) + "\" y=\"" + num(kHeight - 15) +
               "\" text-anchor=\"middle\">" + xlabel + "</text>\n";
        out += "<text x=\"15\" y=\"" + num(0.5 * (kTop + bottom)) +
               "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " + num(0.5 * (kTop + bottom)) +
               ")\">" + ylabel + "</text>\n";
        return out;
    }

    std::string polyline(const std::vector<double>& x, const Series& s) const {
        std::string out = "<polyline fill=\"none\" stroke=\"" + s.color + "\" data-series=\"" +
                          s.name + "\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ' ';
            out += num(px(x[i])) + ',' + num(py(s.y[i]));
        }
        out += "\"/>\n";
        return out;
    }

private:
    double x0_, x1_, y0_, y1_;
};

std::string open_svg() {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string legend(const std::vector<Series>& series) {
    std::string out;
    double x = kLeft + 10;
    for (const auto& s : series) {
        out += "<line x1=\"" + num(x) + "\" y1=\"18\" x2=\"" + num(x + 20) + "\" y2=\"18\" stroke=\"" +
               s.color + "\"/>\n";
        out += "<text x=\"" + num(x + 25) + "\" y=\"22\">" + s.name + "</text>\n";
        x += 70;
    }
    return out;
}

} // namespace

std::string write_plot_svg(const Profile& profile) {
    std::vector<double> x_khz(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) x_khz[i] = profile.offsets_hz[i] / 1000.0;
    const double x0 = x_khz.empty() ? -1.0 : x_khz.front();
    const double x1 = x_khz.empty() ? 1.0 : x_khz.back();
    const Frame frame(x0, x1, -1.05, 1.05);

    const std::vector<Series> series{{"mx", "#1f77b4", profile.mx},
                                     {"my", "#2ca02c", profile.my},
                                     {"mz", "#d62728", profile.mz}};
    std::string out = open_svg();
    out += frame.axes("offset (kHz)", "magnetization", 4);
    if (!x_khz.empty()) {
        for (const auto& s : series) out += frame.polyline(x_khz, s);
        out += legend(series);
    }
    out += "</svg>\n";
    return out;
}

std::string write_plot_svg(const PulseSequence& seq) {
    std::vector<double> t_ms(seq.size());
    Series phase{"phase", "#1f77b4", std::vector<double>(seq.size())};
    for (std::size_t i = 0; i < seq.size(); ++i) {
        t_ms[i] = static_cast<double>(i) * seq.params.dwell_s() * 1e3;
        phase.y[i] = seq.phases_rad[i] * (180.0 / kPi);
    }
    const double t1 = seq.size() ? t_ms.back() : 1.0;
    const Frame frame(0.0, t1, 0.0, 360.0);
    std::string out = open_svg();
    out += frame.axes("time (ms)", "phase (deg)", 4);
    if (seq.size()) out += frame.polyline(t_ms, phase);
    out += "</svg>\n";
    return out;
}

} // namespace fbpulse::io
