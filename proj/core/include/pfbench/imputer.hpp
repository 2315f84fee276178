#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfbench/coalition.hpp"
#include "pfbench/image.hpp"
#include "pfbench/mask.hpp"
#include "pfbench/rng.hpp"

namespace pfb {

/// One occlusion job: which features stay, which RNG stream to use.
struct OcclusionRequest {
    const ImageTensor& image;
    const SuperpixelMask& mask;
    const Coalition& present;  // features S kept
    std::uint64_t sample_index = 0;
    std::uint64_t image_id = 0;

    void validate() const;
};

enum class ImputerKind { mean, trainset, histogram, inpaint, external };

/// External inpainting tool: invoked with a request directory as its single
/// argument, must write output.png there and exit 0 before the deadline.
struct ExternalEndpoint {
    std::string command;
    std::filesystem::path work_dir;
    double deadline_seconds = 300.0;
};

struct ImputerDescriptor {
    ImputerKind kind = ImputerKind::mean;
    std::string id = "mean";
    std::vector<float> channel_means;  // mean imputer, external pre-fill,
                                       // inpaint fallback
    std::shared_ptr<const std::vector<ImageTensor>> pool;  // trainset
    int inpaint_radius = 3;
    std::optional<ExternalEndpoint> endpoint;

    bool is_deterministic() const {
        return kind == ImputerKind::mean || kind == ImputerKind::inpaint;
    }
    bool is_conditional() const {
        return kind == ImputerKind::histogram || kind == ImputerKind::inpaint ||
               kind == ImputerKind::external;
    }
    void validate(std::size_t channels) const;
};

ImputerDescriptor make_mean_imputer(std::vector<float> channel_means,
                                    std::string id = "mean");
ImputerDescriptor make_trainset_imputer(
    std::shared_ptr<const std::vector<ImageTensor>> pool,
    std::string id = "trainset");
ImputerDescriptor make_histogram_imputer(std::string id = "histogram");
ImputerDescriptor make_inpaint_imputer(int radius = 3,
                                       std::string id = "inpaint");
ImputerDescriptor make_external_imputer(ExternalEndpoint endpoint,
                                        std::vector<float> channel_means,
                                        std::string id = "external");

/// Occluded superpixels become the channel-wise constant.
ImageTensor mean_impute(const OcclusionRequest& req,
                        const std::vector<float>& channel_means);

/// One pool image chosen uniformly per request; occluded pixels copied
/// co-located from it.
ImageTensor trainset_impute(const OcclusionRequest& req,
                            const std::vector<ImageTensor>& pool,
                            StreamRng& rng);

/// Each occluded superpixel becomes a constant color sampled uniformly from
/// the original image's pixels.
ImageTensor histogram_impute(const OcclusionRequest& req, StreamRng& rng);

/// Fast-marching inpainting; occluded pixels become convex combinations of
/// known neighbors, so per-channel values stay within the kept range.
/// Throws ValidationError when present is empty (no boundary condition).
ImageTensor inpaint_impute(const OcclusionRequest& req, int radius = 3);

/// Round-trips the request through an external tool (see ExternalEndpoint).
/// Kept pixels are restored from the original no matter what comes back.
ImageTensor external_impute(const OcclusionRequest& req,
                            const ExternalEndpoint& endpoint,
                            const std::vector<float>& channel_means);

/// Descriptor-driven dispatch. Derives the RNG stream from
/// (master_seed, image_id, coalition hash, sample_index) so results are
/// schedule-independent. Full occlusion with the inpaint imputer falls back
/// to the mean imputer.
ImageTensor impute(const ImputerDescriptor& desc, const OcclusionRequest& req,
                   std::uint64_t master_seed);

/// Channel-wise means over a set of images (reference pool statistics).
std::vector<float> channel_means_of(const std::vector<ImageTensor>& images);

}  // namespace pfb
