# stvaudit - Scottish STV tabulation and monotonicity anomaly audit
