#include "lps/l0_smooth.hpp"

#include <cmath>
#include <stdexcept>

#include <opencv2/core.hpp>

namespace lps {

namespace {

// DFT of the circular forward-difference kernels, as |OTF|^2 summed for x and y.
cv::Mat diff_otf_denominator(int h, int w) {
    cv::Mat kx = cv::Mat::zeros(h, w, CV_32F);
    kx.at<float>(0, 0) = -1.f;
    kx.at<float>(0, w - 1) = 1.f;
    cv::Mat ky = cv::Mat::zeros(h, w, CV_32F);
    ky.at<float>(0, 0) = -1.f;
    ky.at<float>(h - 1, 0) = 1.f;
    cv::Mat fx, fy;
    cv::dft(kx, fx, cv::DFT_COMPLEX_OUTPUT);
    cv::dft(ky, fy, cv::DFT_COMPLEX_OUTPUT);
    cv::Mat planes[2], mag2 = cv::Mat::zeros(h, w, CV_32F);
    for (const cv::Mat& f : {fx, fy}) {
        cv::split(f, planes);
        mag2 += planes[0].mul(planes[0]) + planes[1].mul(planes[1]);
    }
    return mag2;
}

inline float wrap_diff_x(const cv::Mat& m, int y, int x) {
    return m.at<float>(y, (x + 1) % m.cols) - m.at<float>(y, x);
}
inline float wrap_diff_y(const cv::Mat& m, int y, int x) {
    return m.at<float>((y + 1) % m.rows, x) - m.at<float>(y, x);
}

}  // namespace

RgbRaster l0_smooth(const RgbRaster& img, double lambda, double kappa) {
    if (!std::isfinite(lambda) || !std::isfinite(kappa))
        throw std::invalid_argument("l0_smooth: non-finite parameter");
    if (lambda < 0) throw std::invalid_argument("l0_smooth: lambda must be >= 0");
    if (kappa <= 1) throw std::invalid_argument("l0_smooth: kappa must be > 1");
    if (lambda == 0) return img;

    const int h = img.height, w = img.width;
    std::vector<cv::Mat> S(3), Fin(3);
    for (int c = 0; c < 3; ++c) {
        S[c].create(h, w, CV_32F);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                S[c].at<float>(y, x) = img.px(x, y)[c] / 255.f;
        cv::dft(S[c], Fin[c], cv::DFT_COMPLEX_OUTPUT);
    }

    cv::Mat denom0 = diff_otf_denominator(h, w);
    const double beta_max = 1e5;
    double beta = 2.0 * lambda;

    std::vector<cv::Mat> hx(3), vy(3);
    for (int c = 0; c < 3; ++c) {
        hx[c].create(h, w, CV_32F);
        vy[c].create(h, w, CV_32F);
    }

    while (beta < beta_max) {
        // h,v subproblem: keep the gradient where its squared magnitude
        // (summed over channels) exceeds lambda/beta, zero it otherwise.
        const float cut = static_cast<float>(lambda / beta);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                float mag2 = 0;
                float gx[3], gy[3];
                for (int c = 0; c < 3; ++c) {
                    gx[c] = wrap_diff_x(S[c], y, x);
                    gy[c] = wrap_diff_y(S[c], y, x);
                    mag2 += gx[c] * gx[c] + gy[c] * gy[c];
                }
                const bool keep = mag2 > cut;
                for (int c = 0; c < 3; ++c) {
                    hx[c].at<float>(y, x) = keep ? gx[c] : 0.f;
                    vy[c].at<float>(y, x) = keep ? gy[c] : 0.f;
                }
            }
        }
        // S subproblem in the frequency domain.
        cv::Mat denom = 1.f + static_cast<float>(beta) * denom0;
        for (int c = 0; c < 3; ++c) {
            // conj(OTF) * F(g) expressed spatially as the backward-difference
            // divergence of (hx, vy), circular boundary.
            cv::Mat div(h, w, CV_32F);
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    float dx = hx[c].at<float>(y, (x - 1 + w) % w) - hx[c].at<float>(y, x);
                    float dy = vy[c].at<float>((y - 1 + h) % h, x) - vy[c].at<float>(y, x);
                    div.at<float>(y, x) = dx + dy;
                }
            }
            cv::Mat fdiv;
            cv::dft(div, fdiv, cv::DFT_COMPLEX_OUTPUT);
            cv::Mat num = Fin[c] + static_cast<float>(beta) * fdiv;
            cv::Mat planes[2];
            cv::split(num, planes);
            planes[0] /= denom;
            planes[1] /= denom;
            cv::Mat ratio;
            cv::merge(planes, 2, ratio);
            cv::dft(ratio, S[c], cv::DFT_INVERSE | cv::DFT_REAL_OUTPUT | cv::DFT_SCALE);
        }
        beta *= kappa;
    }

    RgbRaster out;
    out.width = w;
    out.height = h;
    out.data.resize(img.data.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                float v = std::clamp(S[c].at<float>(y, x), 0.f, 1.f);
                out.px(x, y)[c] = static_cast<std::uint8_t>(std::lround(v * 255.f));
            }
    return out;
}

}  // namespace lps
