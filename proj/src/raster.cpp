#include "lps/raster.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace lps {

RgbRaster load_image(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::runtime_error("load_image: file not found: " + path);
    cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
    if (bgr.empty())
        throw std::runtime_error("load_image: cannot decode image: " + path);
    RgbRaster out;
    out.width = bgr.cols;
    out.height = bgr.rows;
    out.data.resize(static_cast<size_t>(bgr.cols) * bgr.rows * 3);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            std::uint8_t* p = out.px(x, y);
            p[0] = row[x][2];
            p[1] = row[x][1];
            p[2] = row[x][0];
        }
    }
    return out;
}

RgbRaster resize_max_dim(const RgbRaster& img, int max_dim) {
    int longest = std::max(img.width, img.height);
    if (max_dim <= 0 || longest <= max_dim) return img;
    double s = static_cast<double>(max_dim) / longest;
    cv::Mat src(img.height, img.width, CV_8UC3, const_cast<std::uint8_t*>(img.data.data()));
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(), s, s, cv::INTER_AREA);
    RgbRaster out;
    out.width = dst.cols;
    out.height = dst.rows;
    out.data.assign(dst.data, dst.data + static_cast<size_t>(dst.cols) * dst.rows * 3);
    return out;
}

namespace {

inline double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
    constexpr double eps = 216.0 / 24389.0;
    constexpr double kap = 24389.0 / 27.0;
    return t > eps ? std::cbrt(t) : (kap * t + 16.0) / 116.0;
}

}  // namespace

LabRaster rgb_to_lab(const RgbRaster& img) {
    LabRaster out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.data.size());
    // D65 reference white
    constexpr double Xn = 0.95047, Yn = 1.0, Zn = 1.08883;
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i) {
        double r = srgb_to_linear(img.data[3 * i + 0] / 255.0);
        double g = srgb_to_linear(img.data[3 * i + 1] / 255.0);
        double b = srgb_to_linear(img.data[3 * i + 2] / 255.0);
        double X = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
        double Y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
        double Z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
        double fx = lab_f(X / Xn), fy = lab_f(Y / Yn), fz = lab_f(Z / Zn);
        double L = 116.0 * fy - 16.0;
        double A = 500.0 * (fx - fy);
        double B = 200.0 * (fy - fz);
        out.data[3 * i + 0] = static_cast<float>(std::clamp(L, 0.0, 100.0));
        out.data[3 * i + 1] = static_cast<float>(std::clamp(A, -128.0, 127.0));
        out.data[3 * i + 2] = static_cast<float>(std::clamp(B, -128.0, 127.0));
    }
    return out;
}

GrayRaster load_gray(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::runtime_error("load_gray: file not found: " + path);
    cv::Mat m = cv::imread(path, cv::IMREAD_GRAYSCALE);
    if (m.empty())
        throw std::runtime_error("load_gray: cannot decode image: " + path);
    GrayRaster out;
    out.width = m.cols;
    out.height = m.rows;
    out.data.resize(static_cast<size_t>(m.cols) * m.rows);
    for (int y = 0; y < m.rows; ++y)
        std::copy_n(m.ptr<std::uint8_t>(y), m.cols, out.data.data() + static_cast<size_t>(y) * m.cols);
    return out;
}

void save_png(const RgbRaster& img, const std::string& path) {
    cv::Mat rgb(img.height, img.width, CV_8UC3, const_cast<std::uint8_t*>(img.data.data()));
    cv::Mat bgr;
    cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
    if (!cv::imwrite(path, bgr))
        throw std::runtime_error("save_png: cannot write: " + path);
}

void save_png(const GrayRaster& img, const std::string& path) {
    cv::Mat m(img.height, img.width, CV_8UC1, const_cast<std::uint8_t*>(img.data.data()));
    if (!cv::imwrite(path, m))
        throw std::runtime_error("save_png: cannot write: " + path);
}

}  // namespace lps
