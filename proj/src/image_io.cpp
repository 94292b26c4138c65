#include "f2a/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "f2a/errors.hpp"

namespace f2a {

Image load_image(const std::string& path) {
    cv::Mat mat = cv::imread(path, cv::IMREAD_COLOR);
    if (mat.empty())
        throw DataError("cannot read image: " + path);
    Image img(mat.rows, mat.cols, 3);
    for (int i = 0; i < mat.rows; ++i) {
        const cv::Vec3b* row = mat.ptr<cv::Vec3b>(i);
        for (int j = 0; j < mat.cols; ++j) {
            // OpenCV decodes BGR; store RGB.
            img.at(i, j, 0) = row[j][2] / 255.0;
            img.at(i, j, 1) = row[j][1] / 255.0;
            img.at(i, j, 2) = row[j][0] / 255.0;
        }
    }
    return img;
}

namespace {

unsigned char quantize(double v) {
    return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

} // namespace

void save_image(const std::string& path, const Image& img) {
    if (img.channels() != 3)
        throw DataError("save_image expects a 3-channel image, got " +
                        std::to_string(img.channels()));
    cv::Mat mat(img.height(), img.width(), CV_8UC3);
    for (int i = 0; i < img.height(); ++i) {
        cv::Vec3b* row = mat.ptr<cv::Vec3b>(i);
        for (int j = 0; j < img.width(); ++j) {
            row[j][2] = quantize(img.at(i, j, 0));
            row[j][1] = quantize(img.at(i, j, 1));
            row[j][0] = quantize(img.at(i, j, 2));
        }
    }
    if (!cv::imwrite(path, mat))
        throw DataError("cannot write image: " + path);
}

void save_attention_png(const std::string& path, const AttentionMap& map) {
    cv::Mat mat(map.height(), map.width(), CV_8UC1);
    for (int i = 0; i < map.height(); ++i) {
        unsigned char* row = mat.ptr<unsigned char>(i);
        for (int j = 0; j < map.width(); ++j)
            row[j] = quantize(map.at(i, j));
    }
    if (!cv::imwrite(path, mat))
        throw DataError("cannot write attention map: " + path);
}

} // namespace f2a
