"""Application-wide constants."""

# Montage and bands
EEG_MONTAGE = ("Fp1", "Fp2", "Fz", "Cz", "T3", "T4", "Pz", "Oz")
FRONTAL_CHANNELS = ("Fp1", "Fp2")

EEG_BANDS = {
    "theta": (3.0, 7.0),
    "alpha": (8.0, 13.0),
    "beta": (14.0, 29.0),
    "gamma": (30.0, 47.0),
}

CHANNEL_STUDY_SETS = (
    ("Fp1", "Fp2", "Fz"),
    ("Fp1", "Fp2", "Cz"),
    ("Fp1", "Fp2", "Pz"),
    ("Fp1", "Fp2", "Oz"),
    ("T3", "T4", "Fz"),
    ("T3", "T4", "Cz"),
    ("T3", "T4", "Pz"),
    ("T3", "T4", "Oz"),
    ("Fz", "Cz", "Pz", "Oz"),
)

# Sampling rates (Hz)
DEFAULT_EEG_RATE_HZ = 250.0
DEFAULT_EDA_RATE_HZ = 4.0
DEFAULT_BVP_RATE_HZ = 64.0
DEFAULT_TEMP_RATE_HZ = 4.0

# Dataset layout
DATASET_SCHEMA_VERSION = 1
SCORE_MIN = 1.0
SCORE_MAX = 9.0

# Preprocessing
DEFAULT_TRIM_HEAD_S = 2.0
DEFAULT_TRIM_TAIL_S = 2.0
DEFAULT_NOTCH_HZ = 50.0
DEFAULT_NOTCH_Q = 30.0
DEFAULT_BANDPASS_ORDER = 5
DEFAULT_ICA_MAX_ITER = 200
DEFAULT_ICA_TOL = 1e-4
DEFAULT_ICA_AUTO_MIN_SCORE = 0.6
EOG_LOW_FREQ_HZ = 4.0

# Spectral estimation
DEFAULT_EEG_SEG_LEN = 256
DEFAULT_LOW_RATE_SEG_LEN = 128
DEFAULT_OVERLAP = 0.5
DEFAULT_WINDOW = "hann"
MIN_SEG_LEN = 8

# Peripheral features
EDA_SPECTRUM_MAX_HZ = 2.4
DEFAULT_EDA_BANDS = 14
COMPAT_EDA_BANDS = 13
EDA_SLOW_RESPONSE_HZ = 0.2
EDA_VERY_SLOW_RESPONSE_HZ = 0.08
EDA_LOWPASS_ORDER = 2
EDA_MIN_SECONDS = 8.0
BVP_MIN_SECONDS = 10.0
PULSE_MIN_SEPARATION_S = 0.3
PULSE_WINDOW_S = 2.0
DEFAULT_PULSE_MAD_K = 0.5
MIN_VALID_PULSES = 4
TACHOGRAM_RATE_HZ = 4.0
HRV_LF_BAND = (0.01, 0.08)
HRV_MF_BAND = (0.08, 0.15)
HRV_HF_BAND = (0.15, 0.5)
HRV_RATIO_LOW_BAND = (0.04, 0.15)
HRV_RATIO_HIGH_BAND = (0.15, 0.5)
HRV_NARROW_BANDS = ((0.1, 0.2), (0.2, 0.3), (0.3, 0.4))
TEMP_BANDS = ((0.0, 0.1), (0.1, 0.2))
TEMP_MIN_DURATION_S = 20.0

# Labeling
DEFAULT_THRESHOLD = 4.5
DEFAULT_KMEANS_RESTARTS = 10
DEFAULT_KMEANS_MAX_ITER = 300
DEFAULT_GMM_MAX_ITER = 200
DEFAULT_GMM_REG = 1e-6
DEFAULT_GMM_TOL = 1e-6
DEFAULT_STIMULUS_K = 3
DEFAULT_PER_CLUSTER = 20
DEFAULT_K_RANGE = (2, 10)
QUADRANTS = ("LVLA", "LVHA", "HVLA", "HVHA")

# Classifier
DEFAULT_SVM_TOL = 1e-3
DEFAULT_SVM_MAX_ITER = 100_000
DEFAULT_L1_MAX_SWEEPS = 1000
GRID_KERNELS = ("linear", "poly", "rbf", "sigmoid")
GRID_C = (1.0, 10.0, 100.0)
GRID_DEGREE = (3, 4, 5)
GRID_COEF0 = (0.0, 0.01, 0.1)
GRID_PENALTY = ("l1", "l2")

# Execution
DEFAULT_SEED = 0
