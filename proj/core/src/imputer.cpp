#include "pfbench/imputer.hpp"

#include <algorithm>
#include <cmath>

#include "pfbench/errors.hpp"

namespace pfb {

void OcclusionRequest::validate() const {
    if (present.n() != mask.n())
        throw ValidationError("coalition size does not match mask");
    if (mask.width() != image.width() || mask.height() != image.height())
        throw ValidationError("mask dimensions do not match image");
}

void ImputerDescriptor::validate(std::size_t channels) const {
    switch (kind) {
        case ImputerKind::mean:
            if (channel_means.size() != channels)
                throw ValidationError("mean imputer needs one mean per channel");
            break;
        case ImputerKind::trainset:
            if (!pool || pool->empty())
                throw ValidationError("trainset imputer needs a non-empty pool");
            break;
        case ImputerKind::histogram:
            break;
        case ImputerKind::inpaint:
            if (inpaint_radius < 1)
                throw ValidationError("inpaint radius must be >= 1");
            break;
        case ImputerKind::external:
            if (!endpoint) throw ValidationError("external imputer needs endpoint");
            if (channel_means.size() != channels)
                throw ValidationError("external imputer needs channel means");
            break;
    }
}

ImputerDescriptor make_mean_imputer(std::vector<float> channel_means,
                                    std::string id) {
    ImputerDescriptor d;
    d.kind = ImputerKind::mean;
    d.id = std::move(id);
    d.channel_means = std::move(channel_means);
    return d;
}

ImputerDescriptor make_trainset_imputer(
    std::shared_ptr<const std::vector<ImageTensor>> pool, std::string id) {
    ImputerDescriptor d;
    d.kind = ImputerKind::trainset;
    d.id = std::move(id);
    d.pool = std::move(pool);
    return d;
}

ImputerDescriptor make_histogram_imputer(std::string id) {
    ImputerDescriptor d;
    d.kind = ImputerKind::histogram;
    d.id = std::move(id);
    return d;
}

ImputerDescriptor make_inpaint_imputer(int radius, std::string id) {
    ImputerDescriptor d;
    d.kind = ImputerKind::inpaint;
    d.id = std::move(id);
    d.inpaint_radius = radius;
    return d;
}

ImputerDescriptor make_external_imputer(ExternalEndpoint endpoint,
                                        std::vector<float> channel_means,
                                        std::string id) {
    ImputerDescriptor d;
    d.kind = ImputerKind::external;
    d.id = std::move(id);
    d.endpoint = std::move(endpoint);
    d.channel_means = std::move(channel_means);
    return d;
}

ImageTensor mean_impute(const OcclusionRequest& req,
                        const std::vector<float>& channel_means) {
    req.validate();
    if (channel_means.size() != req.image.channels())
        throw ValidationError("channel mean count does not match image");
    ImageTensor out = req.image;
    const std::size_t w = out.width(), h = out.height(), c = out.channels();
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (req.present.contains(req.mask.label_at(x, y))) continue;
            for (std::size_t ch = 0; ch < c; ++ch)
                out.at(x, y, ch) = std::clamp(channel_means[ch], 0.0f, 1.0f);
        }
    }
    return out;
}

ImageTensor trainset_impute(const OcclusionRequest& req,
                            const std::vector<ImageTensor>& pool,
                            StreamRng& rng) {
    req.validate();
    if (pool.empty()) throw ValidationError("empty reference pool");
    const ImageTensor& ref = pool[rng.below(pool.size())];
    if (ref.width() != req.image.width() || ref.height() != req.image.height() ||
        ref.channels() != req.image.channels())
        throw ValidationError("pool image dimensions do not match input");

    ImageTensor out = req.image;
    const std::size_t w = out.width(), h = out.height(), c = out.channels();
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (req.present.contains(req.mask.label_at(x, y))) continue;
            for (std::size_t ch = 0; ch < c; ++ch)
                out.at(x, y, ch) = ref.at(x, y, ch);
        }
    }
    return out;
}

ImageTensor histogram_impute(const OcclusionRequest& req, StreamRng& rng) {
    req.validate();
    ImageTensor out = req.image;
    const std::size_t w = out.width(), h = out.height(), c = out.channels();
    const std::size_t n = req.mask.n();

    // One color draw per occluded superpixel, in fixed label order.
    std::vector<std::size_t> fill_pixel(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (req.present.contains(i)) continue;
        fill_pixel[i] = rng.below(w * h);
    }
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            std::int32_t label = req.mask.label_at(x, y);
            if (req.present.contains(label)) continue;
            std::size_t src = fill_pixel[label];
            for (std::size_t ch = 0; ch < c; ++ch)
                out.at(x, y, ch) = req.image.data()[src * c + ch];
        }
    }
    return out;
}

std::vector<float> channel_means_of(const std::vector<ImageTensor>& images) {
    if (images.empty()) throw ValidationError("no images for channel means");
    const std::size_t c = images[0].channels();
    std::vector<double> acc(c, 0.0);
    std::size_t count = 0;
    for (const auto& img : images) {
        if (img.channels() != c)
            throw ValidationError("mixed channel counts in pool");
        const std::size_t px = img.pixel_count();
        for (std::size_t i = 0; i < px; ++i)
            for (std::size_t ch = 0; ch < c; ++ch)
                acc[ch] += img.data()[i * c + ch];
        count += px;
    }
    std::vector<float> means(c);
    for (std::size_t ch = 0; ch < c; ++ch)
        means[ch] = static_cast<float>(acc[ch] / count);
    return means;
}

ImageTensor impute(const ImputerDescriptor& desc, const OcclusionRequest& req,
                   std::uint64_t master_seed) {
    desc.validate(req.image.channels());
    StreamRng rng{master_seed, req.image_id, req.present.hash64(),
                  req.sample_index};
    switch (desc.kind) {
        case ImputerKind::mean:
            return mean_impute(req, desc.channel_means);
        case ImputerKind::trainset:
            return trainset_impute(req, *desc.pool, rng);
        case ImputerKind::histogram:
            return histogram_impute(req, rng);
        case ImputerKind::inpaint:
            if (req.present.is_empty()) {
                // No boundary condition; fall back to the mean fill.
                std::vector<float> means = desc.channel_means;
                if (means.size() != req.image.channels()) {
                    means.assign(req.image.channels(), 0.0f);
                    const std::size_t c = req.image.channels();
                    for (std::size_t i = 0; i < req.image.pixel_count(); ++i)
                        for (std::size_t ch = 0; ch < c; ++ch)
                            means[ch] += req.image.data()[i * c + ch];
                    for (auto& m : means)
                        m /= static_cast<float>(req.image.pixel_count());
                }
                return mean_impute(req, means);
            }
            return inpaint_impute(req, desc.inpaint_radius);
        case ImputerKind::external:
            return external_impute(req, *desc.endpoint, desc.channel_means);
    }
    throw ValidationError("unknown imputer kind");
}

}  // namespace pfb
