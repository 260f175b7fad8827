from .noise import add_gaussian_noise, noise_sigma, sigma_from_nsr, sigma_from_percent
