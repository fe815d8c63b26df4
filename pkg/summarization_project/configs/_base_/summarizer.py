# built-in defaults; method configs override single fields
summarizer = dict(
    method='multiround',
    k=3,  # sentences per summary
    a=0.2,  # threshold position between min and max similarity
    beta1=1.0,  # forward edges
    beta2=0.0,  # backward edges
    alpha1=0.0,  # dampening of a picked sentence's forward edges
    alpha2=0.0,  # dampening of a picked sentence's backward edges
    similarity='dot',

    # textrank only
    damping=0.85,
    max_iter=100,
    tol=1e-6,
)
