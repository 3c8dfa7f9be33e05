var t = "";
Page({
  data: {
    location: ""
  },
  onLoad: function () {
    var msg = t;
  },
  searchLocation: function () {
    var e = this;
    wx.chooseLocation({
      success: function (t) {
        e.setData({ location: t });
      },
      fail: function () {
        console.log("cancelled");
      }
    });
  },
  submit: function () {
    wx.request({
      url: "https://api.example.com/share",
      data: this.data.location
    });
  }
});
