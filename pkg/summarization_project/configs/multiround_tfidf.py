_base_ = [
    './_base_/summarizer.py',
    './_base_/tfidf.py',
]

# starting point for tuning, not a tuned optimum
summarizer = dict(method='multiround', a=0.6, alpha1=0.0, alpha2=0.5)
