"""affectbench.

A batch toolkit for affective-computing studies: curating emotional stimuli by
clustering self-assessments, extracting EEG and wearable (EDA, BVP, skin
temperature) features, labeling trials without supervision, and evaluating
SVM classifiers with nested leave-one-clip-out cross-validation.
"""

__version__ = "0.1.0"
__license__ = "MIT"

# Development status indicators
__status__ = "Alpha"
